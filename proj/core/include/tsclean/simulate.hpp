#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace tsclean {

/// Deterministic standard-normal sampler (Marsaglia polar method over
/// mt19937_64). The standard library's normal_distribution is
/// implementation-defined, which would break byte-identical replays.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next();
    double uniform01();  // [0, 1)

private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Generating process for synthetic streams.
struct ArmaProcessSpec {
    std::vector<double> phi;
    std::vector<double> theta;
    double mean = 0.0;
    double sigma2 = 1.0;
    std::size_t burn_in = 500;
};

/// Simulates n draws of the process after the burn-in. Identical seed and
/// spec give identical output. Throws InvalidProcessSpec on a
/// non-stationary phi, negative sigma2 or non-finite coefficients.
std::vector<double> simulate_arma(const ArmaProcessSpec& spec, std::size_t n,
                                  std::uint64_t seed);

/// One injected anomaly: value at `index` replaced by clean + offset.
struct InjectedAnomaly {
    std::size_t index = 0;
    double clean_value = 0.0;
    double injected_value = 0.0;
};

/// Adds spikes of magnitude_sigmas * sqrt(sigma2) at the given indices,
/// alternating sign deterministically from the seed. Returns the ground
/// truth of what was changed. Throws IndexOutOfBounds.
std::vector<InjectedAnomaly> inject_spikes(std::vector<double>& values,
                                           const std::vector<std::size_t>& indices,
                                           double sigma2, double magnitude_sigmas,
                                           std::uint64_t seed);

/// Deterministically picks `count` spike positions in [first_eligible, n),
/// at least min_gap apart, sorted.
std::vector<std::size_t> pick_spike_indices(std::size_t n, std::size_t count,
                                            std::size_t first_eligible, std::size_t min_gap,
                                            std::uint64_t seed);

}  // namespace tsclean
