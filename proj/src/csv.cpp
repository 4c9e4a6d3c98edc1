#include "ambit/csv.hpp"

#include "ambit/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ambit {

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw config_error("csv: no column named '" + name + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& s = rows.at(row).at(col);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw config_error("csv: row " + std::to_string(row + 2) + " column " + std::to_string(col + 1) +
                           " is not a number: '" + s + "'");
    return v;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void put_row(std::ostringstream& os, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << quote(row[i]);
    }
    os << "\r\n";
}

}  // namespace

std::string to_csv(const CsvTable& table) {
    std::ostringstream os;
    put_row(os, table.header);
    for (const auto& r : table.rows) put_row(os, r);
    return os.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "' for writing");
    f << to_csv(table);
    if (!f) throw config_error("write failed for '" + path + "'");
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> record_line;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_open = false;
    std::size_t line = 1, row_start = 1;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        records.push_back(row);
        record_line.push_back(row_start);
        row.clear();
        row_open = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!row_open) {
            row_open = true;
            row_start = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            // handled with the '\n'
        } else if (c == '\n' || c == '\r') {
            end_row();
            ++line;
        } else {
            field += c;
        }
    }
    if (in_quotes) throw config_error("csv: unterminated quoted field starting on line " + std::to_string(row_start));
    if (row_open) end_row();

    if (records.empty()) throw config_error("csv: missing header row");
    CsvTable t;
    t.header = records.front();
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != t.header.size())
            throw config_error("csv: line " + std::to_string(record_line[r]) + " has " +
                               std::to_string(records[r].size()) + " fields, expected " +
                               std::to_string(t.header.size()));
        t.rows.push_back(std::move(records[r]));
    }
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return parse_csv(os.str());
}

}  // namespace ambit
