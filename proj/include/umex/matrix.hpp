#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace umex {

/// Dense square matrix of doubles, row-major. Plain storage; the metric and
/// ultrametric wrappers add validated invariants on top.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), cells_(n * n, fill) {}

    static SquareMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        SquareMatrix m(rows.size());
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != m.n_) {
                throw std::invalid_argument("SquareMatrix::from_rows: ragged row list");
            }
            std::size_t j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> cells_;
};

/// n x n matrix with `value` everywhere off the diagonal and zeros on it.
inline SquareMatrix uniform_offdiagonal(std::size_t n, double value) {
    SquareMatrix m(n, value);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
    return m;
}

}  // namespace umex
