#pragma once

// Independent reference implementations used to check the library. These
// stay deliberately naive: direct formulas and generic linear algebra, no
// code shared with the implementation under test.

#include <cmath>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace oracles {

// Sample ACF straight from the definition.
inline std::vector<double> direct_acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : x) denom += (v - m) * (v - m);
    std::vector<double> out(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            num += (x[t] - m) * (x[t + k] - m);
        }
        out[k] = num / denom;
    }
    return out;
}

// Gaussian elimination with partial pivoting; generic, not Toeplitz-aware.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) {
            throw std::runtime_error("oracle solve: singular system");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t c = i + 1; c < n; ++c) sum -= a[i][c] * x[c];
        x[i] = sum / a[i][i];
    }
    return x;
}

// PACF(k) as the last coefficient of the order-k Yule-Walker solution,
// each order solved independently by dense elimination.
inline std::vector<double> direct_pacf(std::span<const double> x, std::size_t max_lag) {
    std::vector<double> r = direct_acf(x, max_lag);
    std::vector<double> out(max_lag + 1);
    out[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        std::vector<std::vector<double>> toeplitz(k, std::vector<double>(k));
        std::vector<double> rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                toeplitz[i][j] = r[static_cast<std::size_t>(
                    std::abs(static_cast<long>(i) - static_cast<long>(j)))];
            }
            rhs[i] = r[i + 1];
        }
        out[k] = solve_dense(std::move(toeplitz), std::move(rhs)).back();
    }
    return out;
}

// Closed-form AR(1) forecast: mean + phi^k (x_n - mean), with
// sigma_k = sqrt(sigma2 * sum_{j<k} phi^(2j)).
struct Ar1Forecast {
    std::vector<double> points;
    std::vector<double> std_errors;
};

inline Ar1Forecast ar1_closed_form(double phi, double mu, double sigma2, double last,
                                   int steps) {
    Ar1Forecast out;
    double power = 1.0;
    double var_acc = 0.0;
    double psi_sq = 1.0;
    for (int k = 1; k <= steps; ++k) {
        power *= phi;
        out.points.push_back(mu + power * (last - mu));
        var_acc += psi_sq;
        out.std_errors.push_back(std::sqrt(sigma2 * var_acc));
        psi_sq *= phi * phi;
    }
    return out;
}

// Reference standard-normal quantiles (Abramowitz & Stegun table values).
inline constexpr double kZ90 = 1.2815515655446004;
inline constexpr double kZ95 = 1.6448536269514722;
inline constexpr double kZ975 = 1.959963984540054;
inline constexpr double kZ995 = 2.5758293035489004;

// Test-input generator, separate from the library's sampler.
inline std::vector<double> random_series(std::uint64_t seed, std::size_t n, double lo = -10.0,
                                         double hi = 10.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

inline std::vector<double> gaussian_series(std::uint64_t seed, std::size_t n, double mu = 0.0,
                                           double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(mu, sd);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

}  // namespace oracles
