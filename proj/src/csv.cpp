#include "irsfso/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace irsfso {

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("csv: row width does not match the header");
    rows.push_back(std::move(cells));
}

std::string format_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void write_csv(const CsvTable& t, std::ostream& out) {
    out << "# irsfso-csv v" << t.version << " " << t.name << "\n";
    for (size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_csv_file(const CsvTable& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("csv: cannot write '" + path + "'");
    write_csv(t, f);
}

}  // namespace irsfso
