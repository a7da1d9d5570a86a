#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace sentinel {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Parses JSON text; syntax errors are reported as ParseError with the
/// 1-based line and column of the offending byte.
nlohmann::json parse_json(std::string_view text, std::string_view source_name);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace sentinel
