#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tsclean/timeseries.hpp"

namespace tsclean {

enum class CorrelogramKind { acf, pacf };

/// ACF or PACF coefficients indexed by lag (entry 0 is the lag-0 value, 1.0).
struct CorrelogramResult {
    CorrelogramKind kind = CorrelogramKind::acf;
    std::size_t max_lag = 0;
    std::vector<double> coefficients;  // size max_lag + 1
    std::size_t n = 0;                 // sample size used
    double band = 0.0;                 // significance half-width, 2/sqrt(n)

    double at(std::size_t lag) const { return coefficients.at(lag); }
};

/// Sample autocorrelation up to max_lag. The denominator is the full-series
/// variance, so every coefficient lies in [-1, 1] and lag 0 is exactly 1.
/// Throws DegenerateSeries when the sample variance vanishes, LagTooLarge
/// when max_lag >= n or max_lag < 1.
CorrelogramResult acf(std::span<const double> series, std::size_t max_lag);

/// Partial autocorrelation via Levinson-Durbin on the sample
/// autocovariances. Lag 1 equals the lag-1 ACF by construction.
CorrelogramResult pacf(std::span<const double> series, std::size_t max_lag);

struct StationarityConfig {
    double threshold = 0.4;        // |ACF| must fall below this
    std::size_t decay_by = 20;     // ...no later than this lag
    std::size_t inspected_lags = 40;  // ...and stay below through this lag
};

struct StationarityReport {
    bool stationary = false;
    std::optional<std::size_t> decay_lag;  // first lag from which |ACF| stays below threshold
    double threshold = 0.0;
    std::size_t inspected_lags = 0;
};

/// Quantitative stand-in for eyeballing a correlogram: the series counts as
/// stationary when its ACF has decayed below `threshold` by lag `decay_by`
/// and stays there through `inspected_lags`. Slowly shrinking
/// autocorrelations at large lags fail the test. Lags are clamped to the
/// series length.
StationarityReport assess_stationarity(std::span<const double> series,
                                       const StationarityConfig& config = {});

/// Smallest d <= d_max whose d-th difference passes assess_stationarity.
/// A difference that comes out constant counts as stationary. Throws
/// NotStationarizable when no order works.
int select_d(const TimeSeries& series, int d_max = kDefaultMaxD,
             const StationarityConfig& config = {});

struct LagPlot {
    std::size_t lag = 0;
    std::vector<std::pair<double, double>> pairs;  // (x_t, x_{t+lag})
    double correlation = 0.0;                      // Pearson correlation of the pairs
};

/// Scatter pairs (x_t, x_{t+lag}) plus their Pearson correlation as a
/// linearity score. Throws LagTooLarge if length <= lag + 1 or lag < 1.
LagPlot lag_plot_pairs(std::span<const double> series, std::size_t lag);

}  // namespace tsclean
