#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tsclean/arima.hpp"

namespace tsclean {

/// Serializes a model as the flat key-value document described in
/// docs/formats.md. Round-trips bit-exactly (values printed with 17
/// significant digits).
std::string write_model(const ArimaModel& model);
void write_model(const ArimaModel& model, std::ostream& out);

/// Parses a model document. Throws FormatError on unknown keys, missing
/// fields, or an unsupported version.
ArimaModel read_model(std::istream& in);
ArimaModel read_model_string(const std::string& text);
ArimaModel read_model_file(const std::filesystem::path& path);

}  // namespace tsclean
