#pragma once

#include <string>
#include <vector>

namespace tfus::csv {

// Row-oriented CSV with minimal quoting rules (RFC-style double quotes).
// Lines starting with '#' are artifact stamps / comments and are surfaced
// separately so loaders can validate them.

struct Table {
    std::vector<std::string> comments; // leading '#' lines, in order, without newline
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based line number in the file for each row, for error reporting.
    std::vector<std::size_t> row_lines;
};

std::vector<std::string> split_line(const std::string& line);
std::string join_line(const std::vector<std::string>& fields);

Table read_file(const std::string& path);

// Strict numeric parsing; `context` names the cell in error messages.
double parse_double(const std::string& s, const std::string& context);
long parse_long(const std::string& s, const std::string& context);

// Shortest round-trip representation (std::to_chars); deterministic.
std::string format_double(double v);

} // namespace tfus::csv
