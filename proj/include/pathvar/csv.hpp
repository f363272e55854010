#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "pathvar/errors.hpp"
#include "pathvar/paths.hpp"

namespace pathvar {

/// Malformed CSV input; remembers where (1-based row, 1-based column).
class csv_parse_error : public domain_error {
public:
    csv_parse_error(std::size_t row, std::size_t column, const std::string& what)
        : domain_error("csv row " + std::to_string(row) + ", column " + std::to_string(column) +
                       ": " + what),
          row_(row), column_(column) {}
    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

namespace detail {

inline double parse_double(const std::string& field, std::size_t row, std::size_t column) {
    double out = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw csv_parse_error(row, column, "expected a number, got '" + field + "'");
    return out;
}

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace detail

/// Reads the `t,value` format: header row, one sample per row, strictly
/// increasing t. The interpolation mode travels out-of-band.
inline SampledPath read_path_csv(std::istream& in, Interp interp = Interp::linear) {
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw csv_parse_error(1, 1, "empty input, expected header");
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value")
        throw csv_parse_error(row, 1, "expected header 't,value', got '" + line + "'");
    std::vector<double> times, values;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw csv_parse_error(row, 1, "expected 't,value'");
        double t = detail::parse_double(line.substr(0, comma), row, 1);
        double v = detail::parse_double(line.substr(comma + 1), row, 2);
        if (!times.empty() && !(t > times.back()))
            throw csv_parse_error(row, 1, "sample times must be strictly increasing");
        times.push_back(t);
        values.push_back(v);
    }
    if (times.empty()) throw csv_parse_error(row + 1, 1, "no samples");
    return SampledPath(std::move(times), std::move(values), interp);
}

inline SampledPath read_path_csv_file(const std::string& filename, Interp interp = Interp::linear) {
    std::ifstream in(filename);
    if (!in) throw domain_error("cannot open '" + filename + "'");
    return read_path_csv(in, interp);
}

/// Shortest round-trip float formatting keeps repeated runs byte-identical.
inline void write_path_csv(std::ostream& out, const SampledPath& path) {
    out << "t,value\n";
    for (std::size_t i = 0; i < path.size(); ++i)
        out << detail::format_double(path.time(i)) << ',' << detail::format_double(path.value(i))
            << '\n';
}

inline void write_path_csv_file(const std::string& filename, const SampledPath& path) {
    std::ofstream out(filename);
    if (!out) throw domain_error("cannot open '" + filename + "' for writing");
    write_path_csv(out, path);
}

}  // namespace pathvar
