#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "umex/core.hpp"
#include "umex/matrix.hpp"
#include "umex/metric.hpp"

namespace umex {

class Ultrametric;
inline Ultrametric validate_ultrametric(SquareMatrix matrix);

/// Metric whose distance matrix satisfies the strong triangle inequality
/// dist(i, k) <= max(dist(i, j), dist(j, k)). Immutable after construction.
class Ultrametric {
public:
    const SquareMatrix& dist() const noexcept { return dist_; }
    std::size_t size() const noexcept { return dist_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }

    friend bool operator==(const Ultrametric&, const Ultrametric&) = default;

private:
    friend Ultrametric validate_ultrametric(SquareMatrix);
    explicit Ultrametric(SquareMatrix m) : dist_(std::move(m)) {}
    SquareMatrix dist_;
};

/// Checks the metric axioms plus the strong triangle inequality (with
/// relative slack rel_tolerance); the plain triangle inequality follows and
/// is not re-checked.
inline Ultrametric validate_ultrametric(SquareMatrix matrix) {
    detail::check_finite_symmetric_zero_diagonal(matrix);
    detail::check_positive_offdiagonal(matrix);
    const std::size_t n = matrix.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (!leq_within(matrix(i, j), std::max(matrix(i, k), matrix(k, j)))) {
                    throw ValidationError(
                        Axiom::StrongTriangleViolation, {i, j, k},
                        "StrongTriangleViolation(" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + "): dist[" + std::to_string(i) + "][" + std::to_string(j) +
                            "]=" + format_value(matrix(i, j)) + " > max(" + format_value(matrix(i, k)) +
                            ", " + format_value(matrix(k, j)) + ")");
                }
            }
        }
    }
    return Ultrametric(std::move(matrix));
}

namespace detail {

struct WeightedEdge {
    std::size_t a;
    std::size_t b;
    double weight;
};

/// Prim over the dense weight matrix. +infinity marks absent edges; throws if
/// the finite part is disconnected.
inline std::vector<WeightedEdge> minimum_spanning_tree(const SquareMatrix& w) {
    const std::size_t n = w.size();
    std::vector<WeightedEdge> edges;
    if (n <= 1) return edges;
    edges.reserve(n - 1);
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, inf);
    std::vector<std::size_t> best_from(n, 0);
    in_tree[0] = 1;
    for (std::size_t v = 1; v < n; ++v) best[v] = w(0, v);
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
        }
        if (best[u] == inf) {
            throw std::invalid_argument("weight matrix is disconnected across its finite entries");
        }
        edges.push_back({best_from[u], u, best[u]});
        in_tree[u] = 1;
        for (std::size_t v = 0; v < n; ++v) {
            if (!in_tree[v] && w(u, v) < best[v]) {
                best[v] = w(u, v);
                best_from[v] = u;
            }
        }
    }
    return edges;
}

/// Minimax-path (bottleneck) closure: out(i, j) = min over i-j paths of the
/// largest edge weight. This is the pointwise-maximal ultrametric below the
/// weight matrix. Single-linkage construction: MST edges in ascending order,
/// each edge's weight becomes the value between the two components it joins.
inline SquareMatrix minimax_closure(const SquareMatrix& w) {
    const std::size_t n = w.size();
    auto edges = minimum_spanning_tree(w);
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& x, const WeightedEdge& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    SquareMatrix out(n, 0.0);
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), std::size_t{0});
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};
    auto find = [&root](std::size_t x) {
        while (root[x] != x) {
            root[x] = root[root[x]];
            x = root[x];
        }
        return x;
    };
    for (const auto& e : edges) {
        std::size_t ra = find(e.a);
        std::size_t rb = find(e.b);
        for (std::size_t x : members[ra]) {
            for (std::size_t y : members[rb]) {
                out(x, y) = out(y, x) = e.weight;
            }
        }
        if (members[ra].size() < members[rb].size()) std::swap(ra, rb);
        members[ra].insert(members[ra].end(), members[rb].begin(), members[rb].end());
        members[rb].clear();
        members[rb].shrink_to_fit();
        root[rb] = ra;
    }
    return out;
}

}  // namespace detail

/// Subdominant ultrametric of a metric: the pointwise-maximal ultrametric
/// below d, with value the minimax path (bottleneck) distance. Fixed point
/// when d is already an ultrametric.
inline Ultrametric subdominant_ultrametric(const FiniteMetricSpace& space) {
    return validate_ultrametric(detail::minimax_closure(space.dist()));
}

/// Entrywise positive rescaling; ultrametricity is preserved exactly.
inline Ultrametric scale(const Ultrametric& rho, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("scale factor must be positive and finite");
    }
    const std::size_t n = rho.size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = factor * rho(i, j);
        }
    }
    return validate_ultrametric(std::move(m));
}

/// Which unordered distinct pairs a distortion computation ranges over:
/// all of X x X, the pairs with at least one endpoint in S (S x X), or the
/// pairs inside S (S x S).
class PairScope {
public:
    enum class Tag { All, Cross, Inner };

    static PairScope all() { return PairScope(Tag::All, std::nullopt); }
    static PairScope cross(SubsetSelection subset) { return PairScope(Tag::Cross, std::move(subset)); }
    static PairScope inner(SubsetSelection subset) { return PairScope(Tag::Inner, std::move(subset)); }

    Tag tag() const noexcept { return tag_; }
    const std::optional<SubsetSelection>& subset() const noexcept { return subset_; }

    bool contains_pair(std::size_t i, std::size_t j) const {
        switch (tag_) {
            case Tag::All: return true;
            case Tag::Cross: return subset_->contains(i) || subset_->contains(j);
            case Tag::Inner: return subset_->contains(i) && subset_->contains(j);
        }
        return false;
    }

private:
    PairScope(Tag tag, std::optional<SubsetSelection> subset) : tag_(tag), subset_(std::move(subset)) {}
    Tag tag_;
    std::optional<SubsetSelection> subset_;
};

/// How well (a scaling of) an ultrametric approximates a metric over a pair
/// scope. With scaling_c = 1/min_stretch, d <= scaling_c * rho <= factor_D * d
/// holds on the scope, tight at the witnesses.
struct ApproximationReport {
    double scaling_c = 1.0;
    double factor_D = 1.0;
    double max_stretch = 1.0;
    double min_stretch = 1.0;
    std::pair<std::size_t, std::size_t> max_pair{0, 0};
    std::pair<std::size_t, std::size_t> min_pair{0, 0};
};

inline ApproximationReport approximation_parameters(const Ultrametric& rho, const FiniteMetricSpace& d,
                                                    const PairScope& scope) {
    if (rho.size() != d.size()) {
        throw std::invalid_argument("approximation_parameters: dimension mismatch");
    }
    if (scope.subset() && scope.subset()->parent_size() != d.size()) {
        throw std::invalid_argument("approximation_parameters: scope subset does not match the space");
    }
    const std::size_t n = d.size();
    ApproximationReport rep;
    bool seen = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!scope.contains_pair(i, j)) continue;
            const double stretch = rho(i, j) / d(i, j);
            if (!seen || stretch > rep.max_stretch) {
                rep.max_stretch = stretch;
                rep.max_pair = {i, j};
            }
            if (!seen || stretch < rep.min_stretch) {
                rep.min_stretch = stretch;
                rep.min_pair = {i, j};
            }
            seen = true;
        }
    }
    if (!seen) throw std::invalid_argument("approximation_parameters: empty pair scope");
    rep.factor_D = rep.max_stretch / rep.min_stretch;
    rep.scaling_c = 1.0 / rep.min_stretch;
    return rep;
}

struct DominatingUltrametric {
    Ultrametric rho;
    double approx_factor;
};

/// Smallest rescaling of the subdominant ultrametric of d|S that dominates
/// d on S, together with its approximation factor D, so that
/// d <= rho <= D * d holds on all subset pairs (up to rel_tolerance).
/// A single-point subset yields the 1x1 zero ultrametric with D = 1.
inline DominatingUltrametric dominating_ultrametric_on_subset(const FiniteMetricSpace& space,
                                                              const SubsetSelection& subset) {
    const FiniteMetricSpace on_subset = restrict_to(space, subset);
    if (subset.size() == 1) {
        return {validate_ultrametric(SquareMatrix(1, 0.0)), 1.0};
    }
    const Ultrametric sub = subdominant_ultrametric(on_subset);
    double lift = 0.0;
    const std::size_t k = subset.size();
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            lift = std::max(lift, on_subset(a, b) / sub(a, b));
        }
    }
    Ultrametric dominating = scale(sub, lift);
    const ApproximationReport rep = approximation_parameters(dominating, on_subset, PairScope::all());
    return {std::move(dominating), rep.factor_D};
}

}  // namespace umex
