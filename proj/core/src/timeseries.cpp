#include "tsclean/timeseries.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tsclean/errors.hpp"

namespace tsclean {

TimeSeries::TimeSeries(std::vector<double> values_in, double interval_in, double origin_in)
    : values(std::move(values_in)), interval(interval_in), origin(origin_in) {
    if (!(interval > 0.0)) {
        throw DataError("TimeSeries: sampling interval must be positive");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DataError("TimeSeries: non-finite value at index " + std::to_string(i));
        }
    }
}

std::vector<double> diff_once(std::span<const double> x) {
    std::vector<double> out;
    if (x.size() < 2) return out;
    out.reserve(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) {
        out.push_back(x[i] - x[i - 1]);
    }
    return out;
}

DifferencedSeries difference(const TimeSeries& series, int d, int d_max) {
    if (d < 0 || d > d_max) {
        throw OrderTooHigh("difference: order " + std::to_string(d) + " outside 0.." +
                           std::to_string(d_max));
    }
    if (series.size() <= static_cast<std::size_t>(d) + 1) {
        throw SeriesTooShort("difference: series of length " + std::to_string(series.size()) +
                             " cannot be differenced " + std::to_string(d) + " times");
    }
    DifferencedSeries out;
    out.base = series;
    out.d = d;
    out.values = series.values;
    for (int i = 0; i < d; ++i) {
        out.values = diff_once(out.values);
    }
    return out;
}

TimeSeries DifferencedSeries::undifference() const {
    // Invert one differencing level at a time, reseeding each pass from the
    // initial values the base retained at that level.
    std::vector<std::vector<double>> heads(static_cast<std::size_t>(d));
    std::vector<double> stage = base.values;
    for (int level = 0; level < d; ++level) {
        heads[static_cast<std::size_t>(level)] = stage;  // stage after `level` diffs
        stage = diff_once(stage);
    }

    std::vector<double> current = values;
    for (int level = d; level-- > 0;) {
        const std::vector<double>& head = heads[static_cast<std::size_t>(level)];
        std::vector<double> rebuilt;
        rebuilt.reserve(head.size());
        rebuilt.push_back(head[0]);
        double running = head[0];
        for (double delta : current) {
            running += delta;
            rebuilt.push_back(running);
        }
        current = std::move(rebuilt);
    }
    return TimeSeries(std::move(current), base.interval, base.origin);
}

}  // namespace tsclean
