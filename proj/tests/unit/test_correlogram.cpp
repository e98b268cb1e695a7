#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tsclean/correlogram.hpp"
#include "tsclean/errors.hpp"
#include "tsclean/simulate.hpp"

using namespace tsclean;

TEST_CASE("acf matches hand-computed values") {
    std::vector<double> ramp{1.0, 2.0, 3.0, 4.0};
    CorrelogramResult r = acf(ramp, 1);
    CHECK(r.at(0) == 1.0);
    CHECK(r.at(1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.band == doctest::Approx(2.0 / std::sqrt(4.0)));

    // Alternating series: mean is exactly zero, every lag-1 product is -1.
    std::vector<double> alternating(100);
    for (std::size_t i = 0; i < alternating.size(); ++i) {
        alternating[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    CHECK(acf(alternating, 1).at(1) == doctest::Approx(-0.99).epsilon(1e-12));
}

TEST_CASE("acf rejects degenerate input") {
    std::vector<double> constant(20, 3.5);
    CHECK_THROWS_AS(acf(constant, 3), DegenerateSeries);

    std::vector<double> short_series{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(acf(short_series, 3), LagTooLarge);
    CHECK_THROWS_AS(acf(short_series, 0), LagTooLarge);
}

TEST_CASE("acf is invariant under shift and positive scaling") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::vector<double> x = oracles::random_series(seed, 80);
        std::vector<double> shifted(x.size());
        std::vector<double> scaled(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            shifted[i] = x[i] + 1234.5;
            scaled[i] = x[i] * 7.25;
        }
        CorrelogramResult base = acf(x, 10);
        CorrelogramResult s1 = acf(shifted, 10);
        CorrelogramResult s2 = acf(scaled, 10);
        for (std::size_t k = 0; k <= 10; ++k) {
            CHECK(base.at(k) == doctest::Approx(s1.at(k)).epsilon(1e-9));
            CHECK(base.at(k) == doctest::Approx(s2.at(k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("acf and pacf agree with the direct-formula oracles") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const std::size_t n = 40 + 10 * static_cast<std::size_t>(seed);
        std::vector<double> x = oracles::gaussian_series(seed, std::min<std::size_t>(n, 200));
        const std::size_t max_lag = 12;

        CorrelogramResult a = acf(x, max_lag);
        CorrelogramResult p = pacf(x, max_lag);
        std::vector<double> oracle_a = oracles::direct_acf(x, max_lag);
        std::vector<double> oracle_p = oracles::direct_pacf(x, max_lag);

        for (std::size_t k = 0; k <= max_lag; ++k) {
            CHECK(std::abs(a.at(k) - oracle_a[k]) < 1e-10);
            CHECK(std::abs(p.at(k) - oracle_p[k]) < 1e-10);
        }
        CHECK(std::abs(p.at(1) - a.at(1)) < 1e-12);  // definitional identity
        for (std::size_t k = 0; k <= max_lag; ++k) {
            CHECK(std::abs(a.at(k)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("pacf of a pure AR(1) cuts off after lag 1") {
    ArmaProcessSpec spec;
    spec.phi = {0.7};
    std::vector<double> x = simulate_arma(spec, 5000, 11);

    CorrelogramResult p = pacf(x, 30);
    CHECK(p.at(1) == doctest::Approx(0.7).epsilon(0.05));
    std::size_t inside = 0;
    for (std::size_t k = 2; k <= 30; ++k) {
        if (std::abs(p.at(k)) < p.band) ++inside;
    }
    CHECK(inside >= 27);  // 29 lags, the band is a 95% bound
}

TEST_CASE("pacf of white noise stays inside the significance band") {
    double total_fraction = 0.0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::vector<double> x = oracles::gaussian_series(seed, 1000);
        CorrelogramResult p = pacf(x, 30);
        std::size_t inside = 0;
        for (std::size_t k = 1; k <= 30; ++k) {
            if (std::abs(p.at(k)) < p.band) ++inside;
        }
        total_fraction += static_cast<double>(inside) / 30.0;
    }
    CHECK(total_fraction / 50.0 >= 0.93);
}

TEST_CASE("assess_stationarity separates noise from a random walk") {
    std::vector<double> noise = oracles::gaussian_series(3, 1000);
    CHECK(assess_stationarity(noise).stationary);

    std::vector<double> walk(noise.size());
    std::partial_sum(noise.begin(), noise.end(), walk.begin());
    StationarityReport walk_report = assess_stationarity(walk);
    CHECK_FALSE(walk_report.stationary);

    std::vector<double> diffed(walk.size() - 1);
    for (std::size_t i = 1; i < walk.size(); ++i) diffed[i - 1] = walk[i] - walk[i - 1];
    CHECK(assess_stationarity(diffed).stationary);
}

TEST_CASE("select_d finds the smallest stationarizing order") {
    std::vector<double> noise = oracles::gaussian_series(17, 1000);
    CHECK(select_d(TimeSeries(noise, 1.0)) == 0);

    std::vector<double> trend(noise.size());
    for (std::size_t i = 0; i < trend.size(); ++i) {
        trend[i] = 0.5 * static_cast<double>(i) + noise[i];
    }
    CHECK(select_d(TimeSeries(trend, 1.0)) == 1);

    std::vector<double> walk(noise.size());
    std::partial_sum(noise.begin(), noise.end(), walk.begin());
    CHECK_THROWS_AS(select_d(TimeSeries(walk, 1.0), 0), NotStationarizable);
}

TEST_CASE("lag_plot_pairs reports the pairs and their correlation") {
    std::vector<double> line{1.0, 2.0, 3.0, 4.0, 5.0};
    LagPlot plot = lag_plot_pairs(line, 1);
    REQUIRE(plot.pairs.size() == 4);
    CHECK(plot.pairs.front() == std::pair{1.0, 2.0});
    CHECK(plot.pairs.back() == std::pair{4.0, 5.0});
    CHECK(plot.correlation == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(lag_plot_pairs(line, 4), LagTooLarge);
    CHECK_THROWS_AS(lag_plot_pairs(line, 0), LagTooLarge);
}

TEST_CASE("lag plot correlation tracks the process autocorrelation") {
    for (std::uint64_t seed = 21; seed <= 25; ++seed) {
        std::vector<double> noise = oracles::gaussian_series(seed, 1000);
        CHECK(std::abs(lag_plot_pairs(noise, 1).correlation) < 0.1);
    }

    ArmaProcessSpec spec;
    spec.phi = {0.9};
    std::vector<double> persistent = simulate_arma(spec, 1000, 5);
    CHECK(lag_plot_pairs(persistent, 1).correlation == doctest::Approx(0.9).epsilon(0.06));
}
