#pragma once

#include <string>
#include <vector>

namespace ambit {

// RFC-4180 table with a mandatory header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};

// Shortest decimal form that keeps 17 significant digits of precision.
std::string format_double(double x);

std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

// Throws parse error (config_error) naming the line of any ragged row.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

}  // namespace ambit
