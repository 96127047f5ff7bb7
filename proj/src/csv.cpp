#include "finmem/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace finmem::csv {

std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), res.ptr);
}

void Writer::header(std::span<const std::string> columns) {
    arity_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void Writer::row(std::span<const double> values) {
    if (values.size() != arity_) throw std::logic_error("csv row arity does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_number(values[i]);
    }
    out_ << '\n';
}

void Writer::comment(std::string_view text) { out_ << "# " << text << '\n'; }

}  // namespace finmem::csv
