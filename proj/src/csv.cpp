#include "qlink/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace qlink {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::optional<double>>& values) {
    if (values.size() != columns_) {
        throw std::logic_error("CSV row width does not match the header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        if (values[i]) {
            out_ << format_double(*values[i]);
        }
    }
    out_ << '\n';
}

void CsvWriter::text_row(const std::vector<std::string>& values) {
    if (values.size() != columns_) {
        throw std::logic_error("CSV row width does not match the header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        out_ << values[i];
    }
    out_ << '\n';
}

} // namespace qlink
