#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace irsfso {

// One result table. The version comment pins the column contract so a reader
// can detect layout changes; cells are pre-formatted so numeric columns can
// mix with labels.
struct CsvTable {
    std::string name;
    int version = 1;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

// %.15g — enough digits to round-trip the value's short form and keep files
// byte-stable across repeated runs.
std::string format_g15(double v);

void write_csv(const CsvTable& t, std::ostream& out);
void write_csv_file(const CsvTable& t, const std::string& path);

}  // namespace irsfso
