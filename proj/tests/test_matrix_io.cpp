#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "umex/io.hpp"
#include "umex/matrix.hpp"

using umex::ParseError;
using umex::SquareMatrix;

namespace {

SquareMatrix parse(const std::string& text) {
    std::istringstream in(text);
    return umex::read_matrix(in);
}

std::string render(const SquareMatrix& m) {
    std::ostringstream out;
    umex::write_matrix(out, m);
    return out.str();
}

}  // namespace

TEST_CASE("matrix format round trips", "[io]") {
    const std::string text = "2\n0 1\n1 0\n";
    const SquareMatrix m = parse(text);
    REQUIRE(m.size() == 2);
    REQUIRE(m(0, 1) == 1.0);
    REQUIRE(render(m) == text);
}

TEST_CASE("matrix parser accepts odd whitespace", "[io]") {
    const SquareMatrix m = parse("3\n0  1\t2\n1 0 1\n2 1 0\n\n  \n");
    REQUIRE(m.size() == 3);
    REQUIRE(m(0, 2) == 2.0);
}

TEST_CASE("matrix parser rejects malformed input", "[io]") {
    REQUIRE_THROWS_AS(parse(""), ParseError);
    REQUIRE_THROWS_AS(parse("x\n"), ParseError);
    REQUIRE_THROWS_AS(parse("2 2\n0 1\n1 0\n"), ParseError);
    REQUIRE_THROWS_AS(parse("0\n"), ParseError);
    REQUIRE_THROWS_AS(parse("2\n0 1\n"), ParseError);              // missing row
    REQUIRE_THROWS_AS(parse("2\n0 1 2\n1 0\n"), ParseError);      // wrong row width
    REQUIRE_THROWS_AS(parse("2\n0 a\na 0\n"), ParseError);        // not a number
    REQUIRE_THROWS_AS(parse("2\n0 1\n1 0\ngarbage\n"), ParseError);
    REQUIRE_THROWS_AS(parse("2\n0 1\n1 0\n0 0\n"), ParseError);   // extra row
    REQUIRE_THROWS_AS(parse("2\n0 inf\ninf 0\n"), ParseError);    // non-finite
    REQUIRE_THROWS_AS(parse("2\n0 nan\nnan 0\n"), ParseError);
    REQUIRE_THROWS_AS(parse("-2\n"), ParseError);
}

TEST_CASE("index list parsing", "[io]") {
    std::istringstream in("1 3 5\n");
    const auto ids = umex::read_index_list(in);
    REQUIRE(ids == std::vector<std::size_t>{1, 3, 5});

    std::istringstream trailing("1 3\n7\n");
    REQUIRE_THROWS_AS(umex::read_index_list(trailing), ParseError);
    std::istringstream empty("\n");
    REQUIRE_THROWS_AS(umex::read_index_list(empty), ParseError);
    std::istringstream negative("-1 2\n");
    REQUIRE_THROWS_AS(umex::read_index_list(negative), ParseError);
    std::istringstream junk("1 two\n");
    REQUIRE_THROWS_AS(umex::read_index_list(junk), ParseError);
}

TEST_CASE("written values are byte-stable under re-parsing", "[io]") {
    // After one write, parsing and re-writing reproduces the bytes: a
    // 12-significant-digit decimal parsed to the nearest double prints back
    // to the same string.
    std::mt19937_64 rng(41);
    SquareMatrix m(5);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) {
            m(i, j) = m(j, i) = 1.0 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
    }
    const std::string first = render(m);
    const SquareMatrix reparsed = parse(first);
    REQUIRE(render(reparsed) == first);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            REQUIRE(umex::eq_within(reparsed(i, j), m(i, j)));
        }
    }
}
