#include "tsclean/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsclean/errors.hpp"
#include "tsclean/numeric.hpp"

namespace tsclean {

double GaussianSampler::uniform01() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double GaussianSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Marsaglia polar method; fully determined by the mt19937_64 stream.
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

std::vector<double> simulate_arma(const ArmaProcessSpec& spec, std::size_t n,
                                  std::uint64_t seed) {
    for (double c : spec.phi) {
        if (!std::isfinite(c)) throw InvalidProcessSpec("simulate_arma: non-finite phi");
    }
    for (double c : spec.theta) {
        if (!std::isfinite(c)) throw InvalidProcessSpec("simulate_arma: non-finite theta");
    }
    if (!std::isfinite(spec.mean) || !(spec.sigma2 >= 0.0)) {
        throw InvalidProcessSpec("simulate_arma: bad mean or variance");
    }
    if (!ar_polynomial_stationary(spec.phi)) {
        throw InvalidProcessSpec("simulate_arma: phi is not stationary");
    }

    GaussianSampler gauss(seed);
    const double sigma = std::sqrt(spec.sigma2);
    const std::size_t p = spec.phi.size();
    const std::size_t q = spec.theta.size();
    const std::size_t total = spec.burn_in + n;

    std::vector<double> w(total, 0.0);   // centered process
    std::vector<double> eps(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        eps[t] = sigma * gauss.next();
        double value = eps[t];
        for (std::size_t i = 1; i <= std::min(p, t); ++i) {
            value += spec.phi[i - 1] * w[t - i];
        }
        for (std::size_t j = 1; j <= std::min(q, t); ++j) {
            value += spec.theta[j - 1] * eps[t - j];
        }
        w[t] = value;
    }

    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = spec.mean + w[spec.burn_in + t];
    }
    return out;
}

std::vector<InjectedAnomaly> inject_spikes(std::vector<double>& values,
                                           const std::vector<std::size_t>& indices,
                                           double sigma2, double magnitude_sigmas,
                                           std::uint64_t seed) {
    const double magnitude = magnitude_sigmas * std::sqrt(sigma2);
    GaussianSampler sign_source(seed ^ 0x51ab5eedULL);
    std::vector<InjectedAnomaly> truth;
    truth.reserve(indices.size());
    for (std::size_t idx : indices) {
        if (idx >= values.size()) {
            throw IndexOutOfBounds("inject_spikes: index " + std::to_string(idx) +
                                   " outside series of length " + std::to_string(values.size()));
        }
        const double sign = sign_source.uniform01() < 0.5 ? -1.0 : 1.0;
        InjectedAnomaly a;
        a.index = idx;
        a.clean_value = values[idx];
        a.injected_value = values[idx] + sign * magnitude;
        values[idx] = a.injected_value;
        truth.push_back(a);
    }
    return truth;
}

std::vector<std::size_t> pick_spike_indices(std::size_t n, std::size_t count,
                                            std::size_t first_eligible, std::size_t min_gap,
                                            std::uint64_t seed) {
    if (first_eligible >= n || count == 0) return {};
    GaussianSampler source(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> picked;
    picked.reserve(count);
    const std::size_t span = n - first_eligible;
    std::size_t attempts = 0;
    while (picked.size() < count && attempts < 1000 * count) {
        ++attempts;
        const std::size_t candidate =
            first_eligible + static_cast<std::size_t>(source.uniform01() * static_cast<double>(span));
        bool clash = false;
        for (std::size_t existing : picked) {
            const std::size_t lo = existing > min_gap ? existing - min_gap : 0;
            if (candidate >= lo && candidate <= existing + min_gap) {
                clash = true;
                break;
            }
        }
        if (!clash) picked.push_back(candidate);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace tsclean
