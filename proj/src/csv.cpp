#include "spiraldim/csv.hpp"

#include "spiraldim/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spiraldim {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open output file: " + path);
    }
    out << text;
    if (!out) {
        throw Error("failed writing " + path);
    }
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open CSV file: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("empty CSV file: " + path);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::string expected;
    for (std::size_t i = 0; i < header.size(); ++i) {
        expected += (i ? "," : "") + header[i];
    }
    if (line != expected) {
        throw ConfigError("CSV header must be '" + expected + "' in " + path);
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        std::istringstream fields(line);
        std::vector<double> row;
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::logic_error&) {
                throw ConfigError("non-numeric cell on line " + std::to_string(line_no) + " of " + path);
            }
        }
        if (row.size() != header.size()) {
            throw ConfigError("wrong column count on line " + std::to_string(line_no) + " of " + path);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace spiraldim
