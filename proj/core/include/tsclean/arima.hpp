#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tsclean/correlogram.hpp"
#include "tsclean/timeseries.hpp"

namespace tsclean {

/// Forecasting is capped at 25 steps; accumulated error makes longer
/// horizons useless for repair.
inline constexpr int kMaxForecastHorizon = 25;

/// A fitted ARIMA(p,d,q) model. Immutable after construction; the
/// constructor enforces coefficient lengths, a stationary AR polynomial and
/// a non-negative innovation variance.
class ArimaModel {
public:
    ArimaModel(int p, int d, int q, std::vector<double> phi, std::vector<double> theta,
               double mean, double sigma2, double aic, std::size_t n_train);

    int p() const { return p_; }
    int d() const { return d_; }
    int q() const { return q_; }
    std::span<const double> phi() const { return phi_; }
    std::span<const double> theta() const { return theta_; }
    double mean() const { return mean_; }
    double sigma2() const { return sigma2_; }
    double aic() const { return aic_; }
    std::size_t n_train() const { return n_train_; }

private:
    int p_, d_, q_;
    std::vector<double> phi_, theta_;
    double mean_, sigma2_, aic_;
    std::size_t n_train_;
};

/// One-step in-sample innovations of a fit, plus their variance.
struct Residuals {
    std::vector<double> values;
    double variance = 0.0;
};

/// AR(p) fit by Yule-Walker on the demeaned series.
struct ArFit {
    std::vector<double> phi;
    double mean = 0.0;
    Residuals residuals;  // one-step prediction errors, burn-in of p samples
    // Innovation variance implied by the Yule-Walker solution itself,
    // c0 * prod(1 - kappa^2). Order selection scores with this: unlike the
    // empirical residual variance its sample size does not shrink with p.
    double yw_variance = 0.0;
};

/// Fits AR(p) via the Yule-Walker equations. p = 0 degenerates to a
/// mean-only model whose residuals are the demeaned series. Order-1 fits
/// recover the lag-1 sample ACF exactly.
ArFit fit_ar(std::span<const double> series, int p);

/// MA(q) fit on a residual series.
struct MaFit {
    std::vector<double> theta;
    double sigma2 = 0.0;  // innovation variance after filtering
};

/// Estimates theta by the innovations algorithm on the residual
/// autocovariances, run to depth max(2q, q + 20) for stable coefficients,
/// then reflects any roots inside the unit circle so the polynomial is
/// invertible. sigma2 is the variance of the filtered one-step errors.
MaFit fit_ma_on_residuals(const Residuals& residuals, int q);

/// Akaike information criterion, n*ln(sigma2) + 2*k_params. The mean counts
/// as one parameter, so a fitted ARMA carries k = p + q + 1.
/// Throws DegenerateVariance when sigma2 <= 0.
double aic(double sigma2, std::size_t n, int k_params);

struct SelectionBounds {
    int p_max = 15;
    int q_max = 35;
    int d_max = kDefaultMaxD;
};

struct SelectionOptions {
    std::size_t min_train = 200;      // refuse to fit on less
    StationarityConfig stationarity;  // drives the choice of d
    bool css_refine = false;          // optional joint conditional-SS polish
    int css_iterations = 8;
};

/// Residual whiteness summary: fraction of residual-ACF lags inside the
/// +-2/sqrt(n) band.
struct WhitenessReport {
    double inside_fraction = 0.0;
    bool pass = false;
    std::size_t lags = 0;
    double band = 0.0;
};

struct ModelSelection {
    ArimaModel model;
    WhitenessReport whiteness;
};

/// Order selection in two stages: difference until stationary, pick the AR
/// order by AIC over 0..p_max, then pick the MA order by AIC over 0..q_max
/// fitted on the chosen AR's residuals. Ties break toward the smaller
/// order, so the result is deterministic. Throws NotStationarizable,
/// SeriesTooShort or AllFitsFailed.
ModelSelection select_model(const TimeSeries& series, const SelectionBounds& bounds = {},
                            const SelectionOptions& options = {});

/// In-sample one-step residuals of a model applied to (original-scale)
/// series values: e_t = w_t - sum phi_i w_{t-i} - sum theta_j e_{t-j} on the
/// demeaned differenced scale, zero-seeded before the start.
Residuals arma_residuals(const ArimaModel& model, std::span<const double> series_values);

/// Residual-ACF whiteness check over lags 1..checked_lags; passes when at
/// least min_inside_fraction of them sit inside +-2/sqrt(n).
WhitenessReport residual_diagnostics(const ArimaModel& model,
                                     std::span<const double> series_values,
                                     std::size_t checked_lags = 20,
                                     double min_inside_fraction = 0.9);

/// h-step forecast with per-step standard errors, on the original scale.
struct Forecast {
    int horizon = 0;
    std::vector<double> points;
    std::vector<double> std_errors;  // non-decreasing in the step
    std::size_t origin_index = 0;    // index of the last observed value
};

/// Point forecasts from the ARMA recursion on the differenced scale,
/// integrated back d times anchored on the last d observed values.
/// Standard errors come from the psi-weight expansion,
/// sigma_k = sqrt(sigma2 * sum_{j<k} psi_j^2), with the psi sequence
/// prefix-summed d times when the model is integrated.
/// Throws HorizonTooLarge when h is outside 1..25, InsufficientHistory when
/// the history cannot seed the recursion.
Forecast forecast(const ArimaModel& model, const TimeSeries& history, int h);

/// psi-weights of the ARMA part: psi_0 = 1,
/// psi_j = theta_j + sum_{i=1}^{min(j,p)} phi_i psi_{j-i}.
std::vector<double> psi_weights(const ArimaModel& model, std::size_t count);

}  // namespace tsclean
