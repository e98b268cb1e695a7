#include "tsclean/correlogram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tsclean/errors.hpp"
#include "tsclean/numeric.hpp"

namespace tsclean {

namespace {

void check_lag_args(std::size_t n, std::size_t max_lag) {
    if (max_lag < 1) {
        throw LagTooLarge("correlogram: max_lag must be at least 1");
    }
    if (max_lag >= n) {
        throw LagTooLarge("correlogram: max_lag " + std::to_string(max_lag) +
                          " must be smaller than series length " + std::to_string(n));
    }
}

// Degeneracy guard: treat the series as constant when its variance is zero
// up to accumulated rounding of the mean.
bool effectively_constant(std::span<const double> x, double c0) {
    const double m = mean(x);
    return !(c0 / static_cast<double>(x.size()) > 1e-24 * std::max(1.0, m * m));
}

}  // namespace

CorrelogramResult acf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    check_lag_args(n, max_lag);

    std::vector<double> cov = autocovariance(series, max_lag);
    if (effectively_constant(series, cov[0] * static_cast<double>(n))) {
        throw DegenerateSeries("acf: constant series has no defined autocorrelation");
    }

    CorrelogramResult result;
    result.kind = CorrelogramKind::acf;
    result.max_lag = max_lag;
    result.n = n;
    result.band = 2.0 / std::sqrt(static_cast<double>(n));
    result.coefficients.resize(max_lag + 1);
    result.coefficients[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        result.coefficients[k] = cov[k] / cov[0];
    }
    return result;
}

CorrelogramResult pacf(std::span<const double> series, std::size_t max_lag) {
    const std::size_t n = series.size();
    check_lag_args(n, max_lag);

    std::vector<double> cov = autocovariance(series, max_lag);
    if (effectively_constant(series, cov[0] * static_cast<double>(n))) {
        throw DegenerateSeries("pacf: constant series has no defined autocorrelation");
    }

    LevinsonResult lev = levinson_durbin(cov, max_lag);

    CorrelogramResult result;
    result.kind = CorrelogramKind::pacf;
    result.max_lag = max_lag;
    result.n = n;
    result.band = 2.0 / std::sqrt(static_cast<double>(n));
    result.coefficients.resize(max_lag + 1);
    result.coefficients[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        result.coefficients[k] = lev.reflection[k - 1];
    }
    return result;
}

StationarityReport assess_stationarity(std::span<const double> series,
                                       const StationarityConfig& config) {
    const std::size_t n = series.size();
    if (n < 3) {
        throw SeriesTooShort("assess_stationarity: need at least 3 samples");
    }
    const std::size_t hi = std::min(config.inspected_lags, n - 1);
    const std::size_t decay_by = std::min(config.decay_by, hi);

    CorrelogramResult corr = acf(series, hi);

    StationarityReport report;
    report.threshold = config.threshold;
    report.inspected_lags = hi;

    // First lag from which |ACF| stays below the threshold through lag hi.
    std::optional<std::size_t> decay;
    for (std::size_t k = hi; k >= 1; --k) {
        if (std::abs(corr.at(k)) < config.threshold) {
            decay = k;
        } else {
            break;
        }
        if (k == 1) break;
    }
    report.decay_lag = decay;
    report.stationary = decay.has_value() && *decay <= decay_by;
    return report;
}

int select_d(const TimeSeries& series, int d_max, const StationarityConfig& config) {
    for (int d = 0; d <= d_max; ++d) {
        if (series.size() <= static_cast<std::size_t>(d) + 1) break;
        DifferencedSeries diffed = difference(series, d, d_max);
        try {
            if (assess_stationarity(diffed.values, config).stationary) {
                return d;
            }
        } catch (const DegenerateSeries&) {
            // Differencing collapsed the series to a constant; that is as
            // stationary as it gets.
            return d;
        }
    }
    throw NotStationarizable("select_d: no differencing order up to " + std::to_string(d_max) +
                             " yields a stationary series");
}

LagPlot lag_plot_pairs(std::span<const double> series, std::size_t lag) {
    const std::size_t n = series.size();
    if (lag < 1) {
        throw LagTooLarge("lag_plot_pairs: lag must be at least 1");
    }
    if (n <= lag + 1) {
        throw LagTooLarge("lag_plot_pairs: series of length " + std::to_string(n) +
                          " too short for lag " + std::to_string(lag));
    }

    LagPlot plot;
    plot.lag = lag;
    plot.pairs.reserve(n - lag);
    for (std::size_t t = 0; t + lag < n; ++t) {
        plot.pairs.emplace_back(series[t], series[t + lag]);
    }

    // Pearson correlation of the pairs.
    const std::size_t m = plot.pairs.size();
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : plot.pairs) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& [x, y] : plot.pairs) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw DegenerateSeries("lag_plot_pairs: degenerate coordinate variance");
    }
    plot.correlation = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    return plot;
}

}  // namespace tsclean
