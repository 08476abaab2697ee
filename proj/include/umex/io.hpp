#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "umex/core.hpp"
#include "umex/matrix.hpp"

// Shared text formats.
//
// Matrix: line 1 is the point count n; lines 2..n+1 carry n whitespace
// separated decimal numbers each.
// Index list: a single line of whitespace separated point indices.
//
// Parsers are strict: wrong token counts, non-numeric or non-finite tokens,
// and trailing garbage are ParseErrors. Writers emit 12 significant digits,
// so written files are human-diffable and byte-stable under re-parsing.

namespace umex {

namespace detail {

inline std::vector<std::string> line_tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

inline double parse_double_token(const std::string& tok, const std::string& where) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(where + ": not a number: '" + tok + "'");
    }
    if (!std::isfinite(v)) {
        throw ParseError(where + ": non-finite entry '" + tok + "'");
    }
    return v;
}

inline std::size_t parse_index_token(const std::string& tok, const std::string& where) {
    unsigned long long v = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(where + ": not an index: '" + tok + "'");
    }
    return static_cast<std::size_t>(v);
}

inline void reject_trailing_garbage(std::istream& in, const std::string& what) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line_tokens(line).empty()) {
            throw ParseError(what + ": trailing garbage after the expected data");
        }
    }
}

}  // namespace detail

/// One value formatted with 12 significant digits (printf %.12g).
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline SquareMatrix read_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("matrix: empty input");
    const auto header = detail::line_tokens(line);
    if (header.size() != 1) throw ParseError("matrix: line 1 must hold the point count only");
    const std::size_t n = detail::parse_index_token(header[0], "matrix header");
    if (n < 1) throw ParseError("matrix: point count must be at least 1");

    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("matrix: expected " + std::to_string(n) + " rows, got " + std::to_string(i));
        }
        const auto toks = detail::line_tokens(line);
        if (toks.size() != n) {
            throw ParseError("matrix row " + std::to_string(i) + ": expected " + std::to_string(n) +
                             " values, got " + std::to_string(toks.size()));
        }
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = detail::parse_double_token(toks[j], "matrix entry (" + std::to_string(i) + "," +
                                                              std::to_string(j) + ")");
        }
    }
    detail::reject_trailing_garbage(in, "matrix");
    return m;
}

inline void write_matrix(std::ostream& out, const SquareMatrix& m) {
    out << m.size() << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j) out << ' ';
            out << format_value(m(i, j));
        }
        out << '\n';
    }
}

inline std::vector<std::size_t> read_index_list(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("index list: empty input");
    const auto toks = detail::line_tokens(line);
    if (toks.empty()) throw ParseError("index list: first line holds no indices");
    std::vector<std::size_t> out;
    out.reserve(toks.size());
    for (const auto& tok : toks) out.push_back(detail::parse_index_token(tok, "index list"));
    detail::reject_trailing_garbage(in, "index list");
    return out;
}

inline SquareMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    return read_matrix(in);
}

inline void write_matrix_file(const std::filesystem::path& path, const SquareMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    write_matrix(out, m);
}

inline std::vector<std::size_t> read_index_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    return read_index_list(in);
}

}  // namespace umex
