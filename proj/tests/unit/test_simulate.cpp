#include <cmath>
#include <vector>

#include "doctest.h"
#include "tsclean/correlogram.hpp"
#include "tsclean/errors.hpp"
#include "tsclean/simulate.hpp"

using namespace tsclean;

TEST_CASE("simulate_arma is deterministic for a fixed seed") {
    ArmaProcessSpec spec;
    spec.phi = {0.5};
    std::vector<double> a = simulate_arma(spec, 1000, 7);
    std::vector<double> b = simulate_arma(spec, 1000, 7);
    CHECK(a == b);
    std::vector<double> c = simulate_arma(spec, 1000, 8);
    CHECK(a != c);
}

TEST_CASE("simulated AR(1) has the theoretical lag-1 autocorrelation") {
    ArmaProcessSpec spec;
    spec.phi = {0.5};
    std::vector<double> x = simulate_arma(spec, 5000, 123);
    CHECK(std::abs(acf(x, 1).at(1) - 0.5) < 0.05);
}

TEST_CASE("simulated process honors mean and variance") {
    ArmaProcessSpec spec;
    spec.mean = 250.0;
    spec.sigma2 = 4.0;
    std::vector<double> x = simulate_arma(spec, 20000, 9);
    double sum = 0.0;
    for (double v : x) sum += v;
    const double m = sum / static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - m) * (v - m);
    var /= static_cast<double>(x.size());
    CHECK(m == doctest::Approx(250.0).epsilon(0.001));
    CHECK(var == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("simulate_arma rejects invalid process specs") {
    ArmaProcessSpec random_walk;
    random_walk.phi = {1.0};
    CHECK_THROWS_AS(simulate_arma(random_walk, 100, 1), InvalidProcessSpec);

    ArmaProcessSpec explosive;
    explosive.phi = {0.8, 0.5};
    CHECK_THROWS_AS(simulate_arma(explosive, 100, 1), InvalidProcessSpec);

    ArmaProcessSpec negative_variance;
    negative_variance.sigma2 = -1.0;
    CHECK_THROWS_AS(simulate_arma(negative_variance, 100, 1), InvalidProcessSpec);
}

TEST_CASE("inject_spikes records exact ground truth") {
    std::vector<double> values(100, 10.0);
    std::vector<std::size_t> where{5, 20, 60};
    std::vector<InjectedAnomaly> truth = inject_spikes(values, where, 1.0, 6.0, 3);

    REQUIRE(truth.size() == 3);
    for (const InjectedAnomaly& a : truth) {
        CHECK(a.clean_value == 10.0);
        CHECK(std::abs(a.injected_value - a.clean_value) == doctest::Approx(6.0));
        CHECK(values[a.index] == a.injected_value);
    }
    CHECK_THROWS_AS(inject_spikes(values, {500}, 1.0, 6.0, 3), IndexOutOfBounds);
}

TEST_CASE("pick_spike_indices respects eligibility and spacing") {
    std::vector<std::size_t> picked = pick_spike_indices(1000, 50, 210, 6, 42);
    REQUIRE(picked.size() == 50);
    for (std::size_t i = 0; i < picked.size(); ++i) {
        CHECK(picked[i] >= 210);
        CHECK(picked[i] < 1000);
        if (i > 0) CHECK(picked[i] - picked[i - 1] > 6);
    }
    CHECK(pick_spike_indices(1000, 50, 210, 6, 42) == picked);  // deterministic
}
