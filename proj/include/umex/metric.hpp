#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "umex/core.hpp"
#include "umex/io.hpp"
#include "umex/matrix.hpp"

namespace umex {

/// Ordered subset of the points 0..n-1 of an ambient space. Canonical form:
/// strictly increasing, deduplicated, nonempty, all indices below the parent
/// size.
class SubsetSelection {
public:
    SubsetSelection(std::vector<std::size_t> indices, std::size_t parent_size)
        : indices_(std::move(indices)), parent_size_(parent_size) {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
        if (indices_.empty()) throw std::invalid_argument("subset must be nonempty");
        if (indices_.back() >= parent_size_) {
            throw std::invalid_argument("subset index " + std::to_string(indices_.back()) +
                                        " out of range for a space of " + std::to_string(parent_size_) +
                                        " points");
        }
    }

    static SubsetSelection full(std::size_t n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return SubsetSelection(std::move(all), n);
    }

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t parent_size() const noexcept { return parent_size_; }
    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t operator[](std::size_t position) const { return indices_[position]; }
    bool is_full() const noexcept { return indices_.size() == parent_size_; }

    bool contains(std::size_t point) const {
        return std::binary_search(indices_.begin(), indices_.end(), point);
    }

    /// Position of `point` within the subset, if it is a member.
    std::optional<std::size_t> position_of(std::size_t point) const {
        auto it = std::lower_bound(indices_.begin(), indices_.end(), point);
        if (it == indices_.end() || *it != point) return std::nullopt;
        return static_cast<std::size_t>(it - indices_.begin());
    }

    friend bool operator==(const SubsetSelection&, const SubsetSelection&) = default;

private:
    std::vector<std::size_t> indices_;
    std::size_t parent_size_;
};

class FiniteMetricSpace;
inline FiniteMetricSpace validate_metric(SquareMatrix matrix);

/// Finite metric space on points 0..n-1, held as a distance matrix that has
/// passed all metric axioms. Immutable after construction.
class FiniteMetricSpace {
public:
    const SquareMatrix& dist() const noexcept { return dist_; }
    std::size_t size() const noexcept { return dist_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }

    friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

private:
    friend FiniteMetricSpace validate_metric(SquareMatrix);
    explicit FiniteMetricSpace(SquareMatrix m) : dist_(std::move(m)) {}
    SquareMatrix dist_;
};

namespace detail {

inline void check_finite_symmetric_zero_diagonal(const SquareMatrix& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(m(i, j))) {
                throw ValidationError(Axiom::NonfiniteEntry, {i, j, 0},
                                      "NonfiniteEntry(" + std::to_string(i) + "," + std::to_string(j) +
                                          "): entries must be finite");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m(i, i) != 0.0) {
            throw ValidationError(Axiom::NonzeroDiagonal, {i, 0, 0},
                                  "NonzeroDiagonal(" + std::to_string(i) + "): dist[" + std::to_string(i) +
                                      "][" + std::to_string(i) + "]=" + format_value(m(i, i)));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m(i, j) != m(j, i)) {
                throw ValidationError(Axiom::AsymmetricEntry, {i, j, 0},
                                      "AsymmetricEntry(" + std::to_string(i) + "," + std::to_string(j) +
                                          "): " + format_value(m(i, j)) + " vs " + format_value(m(j, i)));
            }
        }
    }
}

inline void check_positive_offdiagonal(const SquareMatrix& m) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(m(i, j) > 0.0)) {
                throw ValidationError(Axiom::NonpositiveOffDiagonal, {i, j, 0},
                                      "NonpositiveOffDiagonal(" + std::to_string(i) + "," +
                                          std::to_string(j) + "): dist=" + format_value(m(i, j)));
            }
        }
    }
}

}  // namespace detail

/// Checks all metric axioms and wraps the matrix; throws ValidationError
/// naming the first violated axiom and a witness triple. The triangle
/// inequality is checked with relative slack rel_tolerance.
inline FiniteMetricSpace validate_metric(SquareMatrix matrix) {
    detail::check_finite_symmetric_zero_diagonal(matrix);
    detail::check_positive_offdiagonal(matrix);
    const std::size_t n = matrix.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (!leq_within(matrix(i, j), matrix(i, k) + matrix(k, j))) {
                    throw ValidationError(
                        Axiom::TriangleViolation, {i, j, k},
                        "TriangleViolation(" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + "): dist[" + std::to_string(i) + "][" + std::to_string(j) +
                            "]=" + format_value(matrix(i, j)) + " > " + format_value(matrix(i, k)) + " + " +
                            format_value(matrix(k, j)));
                }
            }
        }
    }
    return FiniteMetricSpace(std::move(matrix));
}

/// Line metric on n consecutive integers: dist(i, j) = |i - j|.
inline FiniteMetricSpace path_metric(std::size_t n) {
    if (n < 2) throw std::invalid_argument("path_metric needs at least 2 points");
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = static_cast<double>(i > j ? i - j : j - i);
        }
    }
    return validate_metric(std::move(m));
}

/// Reproducible random metric: symmetric uniform values in [1,2] followed by
/// an all-pairs shortest-path closure. Values in [1,2] already satisfy the
/// triangle inequality; the closure is a safety net. Doubles are derived from
/// raw mt19937_64 output, so the matrix is identical for identical (n, seed)
/// on every platform.
inline FiniteMetricSpace random_metric(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random_metric needs at least 2 points");
    std::mt19937_64 rng(seed);
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            m(i, j) = m(j, i) = 1.0 + unit;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                m(i, j) = std::min(m(i, j), m(i, k) + m(k, j));
            }
        }
    }
    return validate_metric(std::move(m));
}

/// |S| x |S| space with dist'(a, b) = dist(subset[a], subset[b]).
inline FiniteMetricSpace restrict_to(const FiniteMetricSpace& space, const SubsetSelection& subset) {
    if (subset.parent_size() != space.size()) {
        throw std::invalid_argument("subset was built for a space of " +
                                    std::to_string(subset.parent_size()) + " points, not " +
                                    std::to_string(space.size()));
    }
    const std::size_t k = subset.size();
    SquareMatrix m(k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            m(a, b) = space(subset[a], subset[b]);
        }
    }
    return validate_metric(std::move(m));
}

}  // namespace umex
