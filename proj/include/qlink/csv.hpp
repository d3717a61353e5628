#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qlink {

// Shortest representation of a double that round-trips to the same binary64
// value; locale-independent.
std::string format_double(double value);

// Minimal CSV emitter: one header row, fixed column order, '\n' newlines,
// empty cells for missing optionals.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns);

    void row(const std::vector<std::optional<double>>& values);
    void text_row(const std::vector<std::string>& values);

private:
    std::ostream& out_;
    std::size_t columns_;
};

} // namespace qlink
