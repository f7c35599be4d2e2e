#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"

namespace lcx {

/// Parse failure with the 1-based line number of the offending row.
struct ParseError : std::runtime_error {
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    int line;
};

/// Double formatted with 12 significant digits (the CSV contract).
inline std::string format_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("expected a number for ") + what + ", got '" + s +
                                      "'");
    }
}

inline long long parse_int(const std::string& s, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("expected an integer for ") + what + ", got '" + s +
                                      "'");
    }
}

}  // namespace detail

/// Read a PMF from CSV with header `k,p`.  Support points must be ascending
/// and contiguous; gaps and negative masses are rejected.  Totals within 1e-6
/// of 1 are renormalized exactly; anything further off is rejected.
inline DiscreteDist read_pmf_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty input");
    ++line_no;
    {
        auto cells = detail::split_csv_row(line);
        if (cells.size() != 2 || cells[0] != "k" || cells[1] != "p")
            throw ParseError(line_no, "expected header 'k,p'");
    }
    std::vector<double> probs;
    long long offset = 0;
    bool first = true;
    long long prev = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_row(line);
        if (cells.size() != 2) throw ParseError(line_no, "expected two columns");
        const long long k = detail::parse_int(cells[0], line_no, "k");
        const double p = detail::parse_double(cells[1], line_no, "p");
        if (p < 0.0) throw ParseError(line_no, "negative probability");
        if (first) {
            offset = k;
            first = false;
        } else if (k != prev + 1) {
            throw ParseError(line_no, "support gap: k=" + std::to_string(k) + " follows " +
                                          std::to_string(prev));
        }
        prev = k;
        probs.push_back(p);
    }
    if (probs.empty()) throw ParseError(line_no, "no rows");
    // canonical trim
    std::size_t lo = 0, hi = probs.size();
    while (lo < hi && probs[lo] == 0.0) ++lo;
    while (hi > lo && probs[hi - 1] == 0.0) --hi;
    if (lo == hi) throw ParseError(line_no, "all probabilities are zero");
    std::vector<double> trimmed(probs.begin() + static_cast<std::ptrdiff_t>(lo),
                                probs.begin() + static_cast<std::ptrdiff_t>(hi));
    long double total = 0.0L;
    for (double v : trimmed) total += v;
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-6)
        throw ParseError(line_no,
                         "probabilities sum to " + std::to_string(static_cast<double>(total)));
    for (double& v : trimmed) v = static_cast<double>(v / total);
    return DiscreteDist(offset + static_cast<long long>(lo), std::move(trimmed));
}

inline DiscreteDist read_pmf_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_pmf_csv(in);
}

inline void write_pmf_csv(std::ostream& out, const DiscreteDist& d) {
    out << "k,p\n";
    for (std::size_t i = 0; i < d.size(); ++i)
        out << (d.offset() + static_cast<long long>(i)) << ',' << format_g12(d.probs()[i])
            << '\n';
}

/// Read a continuous density grid from CSV with header `x,f`; x strictly
/// increasing.  The log-linear interpolant must integrate to 1 within 1e-9.
inline ContinuousDist read_grid_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty input");
    ++line_no;
    {
        auto cells = detail::split_csv_row(line);
        if (cells.size() != 2 || cells[0] != "x" || cells[1] != "f")
            throw ParseError(line_no, "expected header 'x,f'");
    }
    GridDensity g;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = detail::split_csv_row(line);
        if (cells.size() != 2) throw ParseError(line_no, "expected two columns");
        const double x = detail::parse_double(cells[0], line_no, "x");
        const double f = detail::parse_double(cells[1], line_no, "f");
        if (!g.x.empty() && !(x > g.x.back()))
            throw ParseError(line_no, "x values must be strictly increasing");
        g.x.push_back(x);
        g.f.push_back(f);
    }
    try {
        return ContinuousDist::from_grid(std::move(g));
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
    }
}

inline ContinuousDist read_grid_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_grid_csv(in);
}

}  // namespace lcx
