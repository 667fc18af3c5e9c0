#pragma once

// CSV for sampled functions (x,re,im) and transform samples (tau,re,im,rho).
// Values are written with 17 significant digits so a write/read round trip
// is lossless.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grid_function.hpp"
#include "transform.hpp"

namespace iwt {

// Malformed text input; line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

struct CsvField {
    std::string_view text;
    std::size_t column;
};

inline std::vector<CsvField> split_csv(std::string_view line) {
    std::vector<CsvField> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        std::size_t col = start + 1;
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1), ++col;
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
        out.push_back({f, col});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// Rows of numbers under a mandatory header equal to `header`.
inline std::vector<std::vector<double>> read_table(std::istream& in, const std::vector<std::string>& header,
                                                   const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv(line);
        if (!have_header) {
            bool ok = fields.size() == header.size();
            for (std::size_t i = 0; ok && i < fields.size(); ++i) ok = fields[i].text == header[i];
            if (!ok) {
                std::string want;
                for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
                throw ParseError(source, lineno, 1, "expected header '" + want + "'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size())
            throw ParseError(source, lineno, fields.back().column,
                             "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
        std::vector<double> row;
        for (const auto& f : fields) {
            double v = 0;
            const char* b = f.text.data();
            const char* e = b + f.text.size();
            auto [p, ec] = std::from_chars(b, e, v);
            if (f.text.empty() || ec != std::errc() || p != e)
                throw ParseError(source, lineno, f.column, "not a number: '" + std::string(f.text) + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(source, lineno + 1, 1, "empty input, header missing");
    return rows;
}

}  // namespace detail

inline GridFunction read_grid_function(std::istream& in, const DecayClass& decay, const std::string& source = "<input>") {
    const auto rows = detail::read_table(in, {"x", "re", "im"}, source);
    std::vector<double> x;
    std::vector<cplx> v;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i][0] > 0)) throw ParseError(source, i + 2, 1, "x must be positive");
        if (i > 0 && !(rows[i][0] > rows[i - 1][0])) throw ParseError(source, i + 2, 1, "x must be strictly increasing");
        x.push_back(rows[i][0]);
        v.emplace_back(rows[i][1], rows[i][2]);
    }
    if (x.size() < 2) throw ParseError(source, rows.size() + 2, 1, "at least two rows are required");
    return GridFunction(std::move(x), std::move(v), decay);
}

inline void write_grid_function(std::ostream& out, const GridFunction& f) {
    out << "x,re,im\n";
    for (std::size_t i = 0; i < f.size(); ++i)
        out << format_double(f.nodes()[i]) << ',' << format_double(f.values()[i].real()) << ','
            << format_double(f.values()[i].imag()) << '\n';
}

inline TransformResult read_transform(std::istream& in, double a, const std::string& source = "<input>") {
    const auto rows = detail::read_table(in, {"tau", "re", "im", "rho"}, source);
    TransformResult t;
    t.a = a;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i][0] >= 0)) throw ParseError(source, i + 2, 1, "tau must be non-negative");
        if (i > 0 && !(rows[i][0] > rows[i - 1][0])) throw ParseError(source, i + 2, 1, "tau must be strictly increasing");
        t.tau_nodes.push_back(rows[i][0]);
        t.values.emplace_back(rows[i][1], rows[i][2]);
        t.density.push_back(rows[i][3]);
    }
    return t;
}

inline void write_transform(std::ostream& out, const TransformResult& t) {
    out << "tau,re,im,rho\n";
    for (std::size_t i = 0; i < t.tau_nodes.size(); ++i)
        out << format_double(t.tau_nodes[i]) << ',' << format_double(t.values[i].real()) << ','
            << format_double(t.values[i].imag()) << ',' << format_double(t.density[i]) << '\n';
}

}  // namespace iwt
