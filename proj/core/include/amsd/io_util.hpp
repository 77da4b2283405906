#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace amsd {

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_file(const std::string& path);

/// Writes to `path + ".tmp"` then renames over `path`, so readers never observe a
/// truncated file. Creates missing parent directories.
void write_file_atomic(const std::string& path, std::string_view contents);

/// Parses a finite decimal or scientific-notation number occupying the whole token.
std::optional<double> parse_number(std::string_view token);

/// Shortest text that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace amsd
