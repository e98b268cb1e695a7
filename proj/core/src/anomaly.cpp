#include "tsclean/anomaly.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tsclean/errors.hpp"
#include "tsclean/numeric.hpp"

namespace tsclean {

ConfidenceInterval confidence_interval(double mu, double sigma, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidLevel("confidence_interval: level must lie in (0, 1)");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
        throw InvalidLevel("confidence_interval: non-finite center or negative spread");
    }
    ConfidenceInterval ci;
    ci.level = level;
    ci.z = normal_quantile(0.5 * (1.0 + level));
    ci.lower = mu - ci.z * sigma;
    ci.upper = mu + ci.z * sigma;
    return ci;
}

Verdict test_reading(std::optional<double> observed, const ConfidenceInterval& interval,
                     double forecast_point) {
    Verdict v;
    v.observed = observed;
    v.interval = interval;
    if (!observed.has_value()) {
        v.decision = Decision::substituted_missing;
        v.replacement = forecast_point;
    } else if (interval.contains(*observed)) {
        v.decision = Decision::accepted;
    } else {
        v.decision = Decision::rejected;
        v.replacement = forecast_point;
    }
    return v;
}

double error_percent(double actual, double forecast_value) {
    if (actual == 0.0) {
        throw DivisionByZero("error_percent: actual value is zero");
    }
    return 100.0 * std::abs(actual - forecast_value) / std::abs(actual);
}

Verdict process_reading(NodeStreamState& state, const SensorReading& reading,
                        const ProcessOptions& options) {
    if (!state.model.has_value()) {
        throw ModelMissing("process_reading: node " + std::to_string(state.node_id) +
                           " has no fitted model");
    }
    const double expected = state.next_timestamp();
    if (std::abs(reading.timestamp - expected) > 0.5 * state.interval) {
        throw DataError("process_reading: reading at t=" + std::to_string(reading.timestamp) +
                        " does not match the expected grid slot t=" + std::to_string(expected));
    }

    // Multi-step forecasts always come from the last accepted origin, never
    // from substituted values.
    if (!state.pending_forecast.has_value()) {
        state.pending_forecast = forecast(*state.model, state.history_series(), kMaxAnomalyRun);
    }
    const int step = state.consecutive_anomalies + 1;
    const std::size_t step_idx = static_cast<std::size_t>(step - 1);
    const double mu = state.pending_forecast->points[step_idx];
    const double sigma = state.pending_forecast->std_errors[step_idx];

    Verdict verdict = test_reading(reading.value, confidence_interval(mu, sigma, options.level),
                                   mu);
    verdict.index = state.history.size();
    verdict.forecast_step = step;

    if (verdict.decision == Decision::accepted) {
        state.history.push_back(*reading.value);
        state.consecutive_anomalies = 0;
        state.pending_forecast.reset();
        return verdict;
    }

    // In flag-only mode an out-of-bound observation still flows downstream;
    // a missing slot has nothing to keep, so the forecast fills the grid.
    const double appended = (!options.substitute && reading.value.has_value())
                                ? *reading.value
                                : *verdict.replacement;

    if (state.consecutive_anomalies + 1 >= kMaxAnomalyRun) {
        // Fifth consecutive anomaly: update the data and start the whole
        // process again. Nothing is mutated until the refit succeeds.
        std::vector<double> updated = state.history;
        updated.push_back(appended);
        std::vector<double> fit_sample = updated;
        if (options.refit_drop_window) {
            fit_sample.resize(fit_sample.size() - static_cast<std::size_t>(kMaxAnomalyRun));
        }
        ModelSelection refit = [&] {
            try {
                return select_model(TimeSeries(fit_sample, state.interval, state.origin),
                                    options.bounds, options.selection);
            } catch (const Error& e) {
                throw RefitFailed("process_reading: refit after " +
                                  std::to_string(kMaxAnomalyRun) +
                                  " consecutive anomalies failed: " + e.what());
            }
        }();
        state.history = std::move(updated);
        state.model = std::move(refit.model);
        state.consecutive_anomalies = 0;
        state.fault_flagged = true;
        ++state.refit_count;
        state.pending_forecast.reset();
    } else {
        state.history.push_back(appended);
        ++state.consecutive_anomalies;
    }
    return verdict;
}

}  // namespace tsclean
