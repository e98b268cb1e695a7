#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tsclean/arima.hpp"
#include "tsclean/reading.hpp"
#include "tsclean/timeseries.hpp"

namespace tsclean {

/// Hard cap on consecutive forecast substitutions before the model is
/// refitted on the updated history.
inline constexpr int kMaxAnomalyRun = 5;

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;  // confidence level in (0, 1)
    double z = 0.0;      // critical multiplier, 1.96 at level 0.95

    bool contains(double x) const { return lower <= x && x <= upper; }
};

/// mu +- z * sigma with z from the standard normal quantile at (1+level)/2.
/// Throws InvalidLevel when level is outside (0, 1) or sigma is negative.
ConfidenceInterval confidence_interval(double mu, double sigma, double level);

enum class Decision { accepted, rejected, substituted_missing };

/// Outcome of testing one reading against its forecast interval.
struct Verdict {
    std::size_t index = 0;           // sample index on the node's grid
    std::optional<double> observed;  // empty for a missing reading
    ConfidenceInterval interval;
    Decision decision = Decision::accepted;
    std::optional<double> replacement;  // present iff decision != accepted
    int forecast_step = 1;              // 1..5
};

/// Null hypothesis: the reported value lies inside the interval. Accepted
/// inside, rejected (with the forecast as replacement) outside; a missing
/// observation is substituted by the forecast outright.
Verdict test_reading(std::optional<double> observed, const ConfidenceInterval& interval,
                     double forecast_point);

/// 100 * |actual - forecast| / |actual|. Throws DivisionByZero when
/// actual = 0.
double error_percent(double actual, double forecast);

struct ProcessOptions {
    double level = 0.95;
    bool substitute = true;          // false: flag only, keep observed values
    bool refit_drop_window = false;  // drop the substituted run from the refit sample
    SelectionBounds bounds;
    SelectionOptions selection;
};

/// Per-node, per-channel pipeline state. Exclusively owned by one
/// processing context; process_reading is the only mutator.
struct NodeStreamState {
    int node_id = 0;
    Channel channel = Channel::temperature;
    std::optional<ArimaModel> model;
    std::vector<double> history;  // accepted/corrected values on the grid
    double origin = 0.0;          // timestamp of history[0]
    double interval = 1.0;
    int consecutive_anomalies = 0;
    bool fault_flagged = false;  // sticky; clear_fault() is the only reset
    std::size_t refit_count = 0;

    // 5-step forecast cached at the last accepted origin; invalidated on
    // accept and on refit.
    std::optional<Forecast> pending_forecast;

    double next_timestamp() const {
        return origin + static_cast<double>(history.size()) * interval;
    }
    TimeSeries history_series() const { return TimeSeries(history, interval, origin); }
    void clear_fault() { fault_flagged = false; }
};

/// Runs one reading through the interval test and updates the state: an
/// accepted value is appended and the anomaly counter reset; a rejected or
/// missing value appends the forecast substitute (the observed value in
/// flag-only mode) and bumps the counter. The step-k verdict inside an
/// anomaly run uses the k-step-ahead forecast from the last accepted
/// origin. The fifth consecutive anomaly triggers a refit on the updated
/// history, resets the counter and sets the sticky fault flag.
/// Throws ModelMissing without a fitted model and RefitFailed (state
/// untouched) when the refit cannot be completed.
Verdict process_reading(NodeStreamState& state, const SensorReading& reading,
                        const ProcessOptions& options = {});

}  // namespace tsclean
