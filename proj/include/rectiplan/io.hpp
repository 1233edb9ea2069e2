#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rectiplan/error.hpp"

namespace rectiplan {

// Shortest round-trippable decimal form; all emitted floats go through this
// so reruns are byte-identical.
std::string format_float(double v);

// Binary write with LF endings regardless of platform. Creates parent
// directories as needed.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

std::string read_text_file(const std::filesystem::path& path);

// Numeric rows from a CSV or plain list. A first line containing any letter
// is treated as a header and skipped; blank lines are ignored. Every data
// row must have the same number of comma-separated numeric fields.
std::vector<std::vector<double>> read_csv_rows(const std::filesystem::path& path);

// Single column convenience: takes the last field of each row (so either a
// bare value-per-line file or an index,theta,v export works).
std::vector<double> read_csv_values(const std::filesystem::path& path);

} // namespace rectiplan
