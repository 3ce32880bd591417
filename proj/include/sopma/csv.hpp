#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sopma::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // raw cells, empty string = empty cell
    std::vector<int> line_numbers;               // 1-based source line per row
};

// Reads a comma-separated file with a mandatory header row. Cells are
// not quoted in any of the formats this toolkit consumes.
Table read_table(const std::string& path);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

// Fixed-precision representation, used where the output format pins
// the number of decimals (SVG coordinates).
std::string format_fixed(double v, int precision);

std::optional<double> parse_double(const std::string& cell);

}  // namespace sopma::csv
