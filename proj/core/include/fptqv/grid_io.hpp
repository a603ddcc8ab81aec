#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// CSV grid files: header row, first column t, '.' decimal separator, rows
// sorted by strictly increasing t. Values are printed with 17 significant
// digits so files round-trip bit-exactly through decimal.

namespace fptqv {

struct GridTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data; // column-major, data[c].size() == rows

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    bool has_column(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
};

/// Parses a grid CSV; rejects missing headers, non-numeric or non-finite
/// cells, ragged rows, and unsorted t with line-numbered messages.
GridTable read_grid_csv(std::istream& in, const std::string& origin);
GridTable read_grid_csv(const std::string& path);

std::string format_grid_csv(const GridTable& table);
void write_grid_csv(const std::string& path, const GridTable& table);

/// Formats one value with 17 significant digits (%.17g).
std::string format_number(double v);

} // namespace fptqv
