#include "tsclean/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tsclean/errors.hpp"

namespace tsclean {

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double m = mean(x);
    double sum_sq = 0.0;
    for (double v : x) {
        const double d = v - m;
        sum_sq += d * d;
    }
    return sum_sq / static_cast<double>(x.size());
}

std::vector<double> autocovariance(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    const double m = mean(x);
    std::vector<double> cov(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double sum = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            sum += (x[t] - m) * (x[t + k] - m);
        }
        cov[k] = sum / static_cast<double>(n);
    }
    return cov;
}

LevinsonResult levinson_durbin(std::span<const double> autocov, std::size_t order) {
    if (autocov.size() < order + 1) {
        throw LagTooLarge("levinson_durbin: need autocovariances up to the requested order");
    }
    const double c0 = autocov[0];
    if (!(c0 > 0.0)) {
        throw DegenerateSeries("levinson_durbin: zero lag-0 autocovariance");
    }

    LevinsonResult result;
    result.reflection.reserve(order);
    std::vector<double> a;  // current predictor coefficients
    double err = c0;

    for (std::size_t k = 1; k <= order; ++k) {
        if (err <= c0 * 1e-14) {
            throw NumericalSingularity("levinson_durbin: Toeplitz system singular at order " +
                                       std::to_string(k));
        }
        double acc = autocov[k];
        for (std::size_t j = 1; j < k; ++j) {
            acc -= a[j - 1] * autocov[k - j];
        }
        const double kappa = acc / err;

        std::vector<double> next(k);
        for (std::size_t j = 1; j < k; ++j) {
            next[j - 1] = a[j - 1] - kappa * a[k - 1 - j];
        }
        next[k - 1] = kappa;
        a = std::move(next);

        result.reflection.push_back(kappa);
        err *= (1.0 - kappa * kappa);
    }

    result.ar = std::move(a);
    result.prediction_variance = err;
    return result;
}

bool ar_polynomial_stationary(std::span<const double> phi) {
    // Schur-Cohn step-down: stationary iff every reflection coefficient
    // produced by peeling the polynomial down has magnitude < 1.
    std::vector<double> a(phi.begin(), phi.end());
    while (!a.empty() && std::abs(a.back()) < 1e-300) a.pop_back();
    while (!a.empty()) {
        const double kappa = a.back();
        if (!(std::abs(kappa) < 1.0)) return false;
        const std::size_t k = a.size();
        std::vector<double> lower(k - 1);
        const double denom = 1.0 - kappa * kappa;
        for (std::size_t j = 1; j < k; ++j) {
            lower[j - 1] = (a[j - 1] + kappa * a[k - 1 - j]) / denom;
        }
        a = std::move(lower);
    }
    return true;
}

bool ma_polynomial_invertible(std::span<const double> theta) {
    // theta(z) = 1 + theta_1 z + ... is invertible iff the AR polynomial
    // with coefficients -theta is stationary.
    std::vector<double> flipped(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) flipped[i] = -theta[i];
    return ar_polynomial_stationary(flipped);
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
    // Trim trailing coefficients that are zero relative to the largest one.
    double max_abs = 0.0;
    for (double c : coeffs) max_abs = std::max(max_abs, std::abs(c));
    std::size_t degree = coeffs.size();
    while (degree > 1 && std::abs(coeffs[degree - 1]) <= max_abs * 1e-14) --degree;
    if (degree <= 1) return {};

    const std::size_t n = degree - 1;  // actual polynomial degree
    std::vector<std::complex<double>> monic(n);
    const double lead = coeffs[n];
    for (std::size_t i = 0; i < n; ++i) monic[i] = coeffs[i] / lead;

    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc(1.0, 0.0);  // monic leading term
        for (std::size_t i = n; i-- > 0;) acc = acc * z + monic[i];
        return acc;
    };

    // Durand-Kerner with the usual (0.4 + 0.9i)^k starting spread.
    std::vector<std::complex<double>> roots(n);
    const std::complex<double> base(0.4, 0.9);
    std::complex<double> pw = base;
    for (std::size_t i = 0; i < n; ++i) {
        roots[i] = pw;
        pw *= base;
    }

    const int max_iterations = 1000;
    for (int it = 0; it < max_iterations; ++it) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            if (std::abs(denom) < 1e-300) {
                roots[i] += std::complex<double>(1e-8, 1e-8);
                worst = std::numeric_limits<double>::max();
                continue;
            }
            const std::complex<double> delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta) / (1.0 + std::abs(roots[i])));
        }
        if (worst < 1e-14) return roots;
    }
    throw NonConvergence("polynomial_roots: Durand-Kerner failed to converge");
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidLevel("normal_quantile: probability must lie in (0, 1)");
    }

    // Acklam's rational approximation.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double u = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double u = p - 0.5;
        const double r = u * u;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double u = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
            ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }

    // One Halley step against the exact CDF via erfc.
    static const double sqrt2 = std::sqrt(2.0);
    static const double sqrt_2pi = std::sqrt(8.0 * std::atan(1.0));
    const double e = 0.5 * std::erfc(-x / sqrt2) - p;
    const double u = e * sqrt_2pi * std::exp(x * x / 2.0);
    x -= u / (1.0 + x * u / 2.0);
    return x;
}

}  // namespace tsclean
