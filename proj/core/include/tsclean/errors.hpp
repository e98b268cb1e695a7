#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsclean {

/// Base class for every failure the library reports.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input data is malformed, inconsistent, or insufficient. CLI exit code 2.
struct DataError : Error {
    using Error::Error;
};

/// Estimation or forecasting broke down numerically. CLI exit code 3.
struct NumericalError : Error {
    using Error::Error;
};

// --- data errors ---

struct SeriesTooShort : DataError {
    using DataError::DataError;
};

struct OrderTooHigh : DataError {
    using DataError::DataError;
};

struct DegenerateSeries : DataError {
    using DataError::DataError;
};

struct LagTooLarge : DataError {
    using DataError::DataError;
};

struct HorizonTooLarge : DataError {
    using DataError::DataError;
};

struct InsufficientHistory : DataError {
    using DataError::DataError;
};

struct InvalidLevel : DataError {
    using DataError::DataError;
};

struct DivisionByZero : DataError {
    using DataError::DataError;
};

struct ModelMissing : DataError {
    using DataError::DataError;
};

struct EmptyGroup : DataError {
    using DataError::DataError;
};

struct IndexOutOfBounds : DataError {
    using DataError::DataError;
};

struct OverlappingSegments : DataError {
    using DataError::DataError;
};

struct InvalidProcessSpec : DataError {
    using DataError::DataError;
};

struct DuplicateTimestamp : DataError {
    using DataError::DataError;
};

struct FormatError : DataError {
    using DataError::DataError;
};

/// Carries the 1-based line number of the offending input line.
struct ParseError : DataError {
    ParseError(std::size_t line_number, const std::string& detail)
        : DataError("line " + std::to_string(line_number) + ": " + detail),
          line(line_number) {}
    std::size_t line;
};

// --- numerical errors ---

struct NumericalSingularity : NumericalError {
    using NumericalError::NumericalError;
};

struct NotStationarizable : NumericalError {
    using NumericalError::NumericalError;
};

struct DegenerateVariance : NumericalError {
    using NumericalError::NumericalError;
};

struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

struct AllFitsFailed : NumericalError {
    using NumericalError::NumericalError;
};

struct RefitFailed : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace tsclean
