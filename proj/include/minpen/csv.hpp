#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace minpen {

// Shortest round-trip decimal form; identical doubles always print the same.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvTable {
    std::string filename;  // leaf name, e.g. "checks.csv"
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    // Header plus rows, comma separated, one trailing newline per line.
    std::string serialize() const {
        std::string out;
        auto emit = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        emit(header);
        for (const auto& row : rows) emit(row);
        return out;
    }
};

}  // namespace minpen
