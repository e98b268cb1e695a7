#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsclean {

/// Default cap on the differencing order. Box-Jenkins practice rarely needs
/// more than two differences.
inline constexpr int kDefaultMaxD = 2;

/// An equally spaced sequence of finite readings. Index i maps to time
/// origin + i * interval.
struct TimeSeries {
    std::vector<double> values;
    double interval = 1.0;  // sampling period in seconds, > 0
    double origin = 0.0;    // timestamp of the first sample

    TimeSeries() = default;
    /// Validates finiteness of every value and interval > 0.
    TimeSeries(std::vector<double> values, double interval, double origin = 0.0);

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t i) const { return origin + static_cast<double>(i) * interval; }
};

/// Result of applying d forward differences to a series. Keeps the base
/// series so the transform can be inverted exactly.
struct DifferencedSeries {
    TimeSeries base;
    int d = 0;
    std::vector<double> values;  // length = base.size() - d

    /// Rebuilds the original series by repeated cumulative summation,
    /// reseeding each pass from the retained initial values of the base.
    TimeSeries undifference() const;
};

/// d-th order forward difference. d = 0 returns the series unchanged.
/// Throws OrderTooHigh if d > d_max, SeriesTooShort if size() <= d + 1.
DifferencedSeries difference(const TimeSeries& series, int d, int d_max = kDefaultMaxD);

/// Single first-difference pass over raw values.
std::vector<double> diff_once(std::span<const double> x);

}  // namespace tsclean
