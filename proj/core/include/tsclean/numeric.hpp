#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tsclean {

double mean(std::span<const double> x);

/// Population variance (divides by n). Estimation code uses this variant
/// throughout so that AIC's n*ln(sigma2) term matches the maximum-likelihood
/// variance.
double variance(std::span<const double> x);

/// Biased sample autocovariance c_k = (1/n) * sum_t (x_t - m)(x_{t+k} - m)
/// for k = 0..max_lag. The 1/n normalization keeps correlations in [-1, 1].
std::vector<double> autocovariance(std::span<const double> x, std::size_t max_lag);

struct LevinsonResult {
    std::vector<double> ar;           // order-k predictor coefficients
    std::vector<double> reflection;   // reflection coefficient at each order 1..k
    double prediction_variance = 0.0; // innovation variance of the final predictor
};

/// Solves the Yule-Walker equations for orders 1..order by the
/// Levinson-Durbin recursion. `autocov` must hold c_0..c_order with c_0 > 0.
/// The reflection coefficients are the partial autocorrelations.
/// Throws NumericalSingularity if the Toeplitz system degenerates.
LevinsonResult levinson_durbin(std::span<const double> autocov, std::size_t order);

/// True when the AR polynomial 1 - phi_1 z - ... - phi_p z^p has all roots
/// outside the unit circle. Uses the Schur-Cohn step-down recursion, no root
/// finding involved.
bool ar_polynomial_stationary(std::span<const double> phi);

/// True when the MA polynomial 1 + theta_1 z + ... + theta_q z^q has all
/// roots outside the unit circle.
bool ma_polynomial_invertible(std::span<const double> theta);

/// All complex roots of c_0 + c_1 z + ... + c_n z^n by Durand-Kerner
/// iteration. Trailing near-zero coefficients are dropped before solving.
/// Throws NonConvergence if the iteration fails to settle.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

/// Inverse standard normal CDF. Acklam's rational approximation followed by
/// one Halley refinement; absolute error well below 1e-9.
/// Throws InvalidLevel outside (0, 1).
double normal_quantile(double p);

}  // namespace tsclean
