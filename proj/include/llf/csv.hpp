#pragma once
#include <string>
#include <vector>

namespace llf {

// Deterministic CSV emitter: '.' decimal separator, comma delimiter, one
// header row, LF line endings, floats at 17 significant digits so identical
// inputs produce byte-identical files.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& cells);
    const std::string& text() const { return buf_; }
    void write_file(const std::string& path) const;

    static std::string format(double v);

private:
    std::string buf_;
    std::size_t cols_;
};

} // namespace llf
