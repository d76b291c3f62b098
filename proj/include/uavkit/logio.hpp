#pragma once

#include <string>
#include <vector>

namespace uavkit {

// Shortest round-trip decimal formatting. All artifact writers go through
// this so that re-running a command with identical inputs reproduces
// identical bytes.
std::string format_double(double v);

void append_double(std::string& out, double v);

// Splits a CSV line on commas (no quoting; the artifact formats never need it).
std::vector<std::string> split_csv(const std::string& line);

// Reads a whole file into lines, dropping a trailing empty line.
std::vector<std::string> read_lines(const std::string& path);

void write_file(const std::string& path, const std::string& content);

double parse_double_field(const std::string& field, const std::string& path, size_t line_no);

}  // namespace uavkit
