#include "llf/csv.hpp"

#include <cstdio>
#include <fstream>

#include "llf/errors.hpp"

namespace llf {

CsvWriter::CsvWriter(std::vector<std::string> header) : cols_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

std::string CsvWriter::format(double v) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    return tmp;
}

void CsvWriter::row(const std::vector<double>& values) {
    require(values.size() == cols_, "csv-shape", "row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format(values[i]);
    }
    buf_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
    require(cells.size() == cols_, "csv-shape", "row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "io-error", "cannot open " + path);
    out << buf_;
    require(out.good(), "io-error", "write failed for " + path);
}

} // namespace llf
