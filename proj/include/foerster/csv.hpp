#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace foerster::csv {

/// Shortest round-trip decimal representation, '.' decimal separator,
/// locale-independent.
std::string format_double(double value);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Writes comma-separated values with LF line endings.
void write(const std::filesystem::path& path, const Table& table);

/// Reads a numeric CSV written by write(). Throws std::runtime_error with
/// the offending line on malformed input.
Table read(const std::filesystem::path& path);

}  // namespace foerster::csv
