#include "stretchlab/csv.hpp"

#include <cstdio>

#include "stretchlab/errors.hpp"

namespace stretchlab {

std::string csv_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc),
      n_cols_(columns.size()) {
    if (!out_) throw Error("cannot open output file: " + path);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) {
        throw Error("CSV row width mismatch in " + path_);
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace stretchlab
