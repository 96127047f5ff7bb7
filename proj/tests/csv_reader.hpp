// csv_reader.hpp: round-trip reader for the CSV files written by the CLI

#pragma once

#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace csv_reader {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;  // without the leading "# "

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::out_of_range("no column " + name);
    }

    std::vector<double> values(const std::string& name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Throws std::runtime_error when a row's arity differs from the header's.
inline Table parse(std::istream& in) {
    Table t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        auto fields = split(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
            continue;
        }
        if (fields.size() != t.header.size()) throw std::runtime_error("row arity mismatch: " + line);
        std::vector<double> row;
        for (const auto& f : fields) {
            std::size_t used = 0;
            row.push_back(std::stod(f, &used));
            if (used != f.size()) throw std::runtime_error("bad number: " + f);
        }
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw std::runtime_error("missing header");
    return t;
}

inline Table parse_string(const std::string& s) {
    std::istringstream in(s);
    return parse(in);
}

}  // namespace csv_reader
