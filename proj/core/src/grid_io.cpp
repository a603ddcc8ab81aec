#include "fptqv/grid_io.hpp"

#include "fptqv/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fptqv {

namespace {

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, const std::string& origin, std::size_t line_no,
                  std::size_t col) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw validation_error(origin + ":" + std::to_string(line_no) + ": column " +
                               std::to_string(col + 1) + ": not a finite number: '" + cell + "'");
    return v;
}

} // namespace

bool GridTable::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

const std::vector<double>& GridTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw validation_error("grid table: no column '" + name + "'");
    return data[static_cast<std::size_t>(it - columns.begin())];
}

GridTable read_grid_csv(std::istream& in, const std::string& origin) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw validation_error(origin + ":1: empty file, expected a header row");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    GridTable table;
    for (auto& name : split_csv_line(line)) {
        if (name.empty())
            throw validation_error(origin + ":1: empty column name in header");
        table.columns.push_back(name);
    }
    if (table.columns.front() != "t")
        throw validation_error(origin + ":1: first column must be 't', got '" +
                               table.columns.front() + "'");
    table.data.assign(table.columns.size(), {});

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != table.columns.size())
            throw validation_error(origin + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(table.columns.size()) + " cells, got " +
                                   std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            table.data[c].push_back(parse_cell(cells[c], origin, line_no, c));
        const auto& t = table.data.front();
        if (t.size() >= 2 && !(t[t.size() - 1] > t[t.size() - 2]))
            throw validation_error(origin + ":" + std::to_string(line_no) +
                                   ": t must be strictly increasing");
    }
    return table;
}

GridTable read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open file: " + path);
    return read_grid_csv(in, path);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_grid_csv(const GridTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ',';
            out += format_number(table.data[c][r]);
        }
        out += '\n';
    }
    return out;
}

void write_grid_csv(const std::string& path, const GridTable& table) {
    std::ofstream out(path, std::ios::binary); // binary keeps bytes identical across platforms
    if (!out) throw validation_error("cannot open file for writing: " + path);
    out << format_grid_csv(table);
    if (!out) throw validation_error("failed writing file: " + path);
}

} // namespace fptqv
