// csv.hpp: deterministic CSV output
//
// Numbers use 17 significant digits, '.' as decimal separator and '\n' line
// endings, independent of the global locale.

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finmem::csv {

std::string format_number(double x);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(std::span<const std::string> columns);
    void row(std::span<const double> values);
    void comment(std::string_view text);

private:
    std::ostream& out_;
    std::size_t arity_{0};
};

}  // namespace finmem::csv
