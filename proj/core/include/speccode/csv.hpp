#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace speccode {

/// Shortest-round-trip style formatting with 17 significant digits; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double v);

/// Writes header and rows to `out`; each row must match the header width.
/// Cells holding commas or quotes are quoted.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t width_;
};

} // namespace speccode
