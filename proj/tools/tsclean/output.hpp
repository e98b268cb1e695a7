#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace tscli {

/// Numbers in CSV output: shortest round-trippable-ish form, stable across
/// runs ("%.10g").
std::string fmt(double value);
std::string fmt(std::optional<double> value);  // empty string when missing

/// Writes content to path atomically (write to a sibling temp file, then
/// rename over the target). Creates parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace tscli
