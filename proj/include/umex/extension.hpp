#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "umex/core.hpp"
#include "umex/io.hpp"
#include "umex/matrix.hpp"
#include "umex/metric.hpp"
#include "umex/ultrametric.hpp"

namespace umex {

/// For each point y of X, its nearest point N(y) of S under d, ties broken to
/// the smallest index in S. Points of S map to themselves.
struct NearestNeighborMap {
    std::vector<std::size_t> assign;
    std::vector<double> dist_to_subset;
};

inline NearestNeighborMap nearest_neighbor_map(const FiniteMetricSpace& space,
                                               const SubsetSelection& subset) {
    if (subset.parent_size() != space.size()) {
        throw std::invalid_argument("subset does not match the space");
    }
    const std::size_t n = space.size();
    NearestNeighborMap nn;
    nn.assign.resize(n);
    nn.dist_to_subset.resize(n);
    for (std::size_t y = 0; y < n; ++y) {
        std::size_t best = subset[0];
        double best_dist = space(y, subset[0]);
        for (std::size_t a = 1; a < subset.size(); ++a) {
            const double dist = space(y, subset[a]);
            if (dist < best_dist) {
                best_dist = dist;
                best = subset[a];
            }
        }
        nn.assign[y] = best;
        nn.dist_to_subset[y] = best_dist;
    }
    return nn;
}

/// Nearest-neighbor extension of an ultrametric rho on S to all of X:
///
///   rhobar(x, y) = max{ 2D d(x, N(x)), 2D d(y, N(y)), rho(N(x), N(y)) }
///
/// for distinct x, y, and zero on the diagonal. Requires the hypothesis
/// d <= rho <= D*d on subset pairs (checked, rel_tolerance slack) and D >= 1.
/// The restriction to S is copied verbatim, so it matches rho bit for bit.
/// For x, y in X the result is within 2D+1 of d on every pair that has an
/// endpoint in S; verify_extension checks the exact per-pair bounds.
inline Ultrametric extend(const FiniteMetricSpace& space, const SubsetSelection& subset,
                          const Ultrametric& rho, double approx_factor) {
    if (subset.parent_size() != space.size()) {
        throw std::invalid_argument("subset does not match the space");
    }
    if (rho.size() != subset.size()) {
        throw std::invalid_argument("rho is " + std::to_string(rho.size()) + "x" +
                                    std::to_string(rho.size()) + " but the subset has " +
                                    std::to_string(subset.size()) + " points");
    }
    if (!(approx_factor >= 1.0) || !std::isfinite(approx_factor)) {
        throw std::invalid_argument("approximation factor must be >= 1");
    }
    const std::size_t k = subset.size();
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const std::size_t x = subset[a];
            const std::size_t y = subset[b];
            const double dxy = space(x, y);
            if (!leq_within(dxy, rho(a, b))) {
                throw ValidationError(Axiom::HypothesisViolated, {x, y, 0},
                                      "HypothesisViolated(" + std::to_string(x) + "," + std::to_string(y) +
                                          "): d=" + format_value(dxy) + " > rho=" + format_value(rho(a, b)) +
                                          " (lower side)");
            }
            if (!leq_within(rho(a, b), approx_factor * dxy)) {
                throw ValidationError(Axiom::HypothesisViolated, {x, y, 0},
                                      "HypothesisViolated(" + std::to_string(x) + "," + std::to_string(y) +
                                          "): rho=" + format_value(rho(a, b)) + " > D*d=" +
                                          format_value(approx_factor * dxy) + " (upper side)");
            }
        }
    }

    const std::size_t n = space.size();
    const NearestNeighborMap nn = nearest_neighbor_map(space, subset);
    constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> position(n, npos);
    for (std::size_t a = 0; a < k; ++a) position[subset[a]] = a;

    // 2D * d(x, N(x)); exactly zero on S
    std::vector<double> reach(n);
    for (std::size_t y = 0; y < n; ++y) reach[y] = 2.0 * approx_factor * nn.dist_to_subset[y];

    SquareMatrix out(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            double value;
            if (position[x] != npos && position[y] != npos) {
                value = rho(position[x], position[y]);
            } else {
                const double inherited = rho(position[nn.assign[x]], position[nn.assign[y]]);
                value = std::max({reach[x], reach[y], inherited});
            }
            out(x, y) = out(y, x) = value;
        }
    }
    return validate_ultrametric(std::move(out));
}

struct InferredExtension {
    Ultrametric rhobar;
    double approx_factor;
};

/// Convenience mode: infers D as the approximation factor of rho against d on
/// the subset pairs (1 for a single-point subset), then extends with it. The
/// explicit-D overload is canonical.
inline InferredExtension extend_with_inferred_factor(const FiniteMetricSpace& space,
                                                     const SubsetSelection& subset,
                                                     const Ultrametric& rho) {
    double factor = 1.0;
    if (subset.size() >= 2) {
        if (rho.size() != subset.size()) {
            throw std::invalid_argument("rho dimension does not match the subset");
        }
        factor = approximation_parameters(rho, restrict_to(space, subset), PairScope::all()).factor_D;
    }
    return {extend(space, subset, rho, factor), factor};
}

/// One side of a distortion bound: the extremal rhobar/d ratio over a pair
/// scope against the required constant multiple of d.
struct BoundCheck {
    bool ok = true;
    double bound = 0.0;
    double worst_ratio = std::numeric_limits<double>::quiet_NaN();
    std::size_t witness_i = 0;
    std::size_t witness_j = 0;
};

/// Outcome of checking an extension against its guarantees: restriction
/// equality on S x S, the global lower bound 2D/(2(D+1)) * d (= D/(D+1) * d),
/// the 2D/(2D+1) * d lower and 2D * d upper bounds on S x X pairs, and the
/// strong triangle inequality of the output.
struct ExtensionReport {
    double approx_factor = 1.0;
    bool restriction_exact = true;
    BoundCheck global_lower;
    BoundCheck cross_lower;
    BoundCheck cross_upper;
    double cross_distortion = 1.0;
    bool is_ultrametric = true;
    std::array<std::size_t, 3> ultrametric_witness{0, 0, 0};

    bool all_ok() const {
        return restriction_exact && global_lower.ok && cross_lower.ok && cross_upper.ok && is_ultrametric;
    }

    std::string to_text() const {
        auto flag = [](bool b) { return b ? "true" : "false"; };
        auto pair_of = [](std::size_t i, std::size_t j) {
            return std::to_string(i) + "," + std::to_string(j);
        };
        std::string s;
        s += "D=" + format_value(approx_factor) + "\n";
        s += "restriction_exact=" + std::string(flag(restriction_exact)) + "\n";
        s += "global_lower_ok=" + std::string(flag(global_lower.ok)) + "\n";
        s += "global_lower_bound=" + format_value(global_lower.bound) + "\n";
        s += "global_lower_worst_ratio=" + format_value(global_lower.worst_ratio) + "\n";
        s += "global_lower_witness=" + pair_of(global_lower.witness_i, global_lower.witness_j) + "\n";
        s += "cross_lower_ok=" + std::string(flag(cross_lower.ok)) + "\n";
        s += "cross_lower_bound=" + format_value(cross_lower.bound) + "\n";
        s += "cross_lower_worst_ratio=" + format_value(cross_lower.worst_ratio) + "\n";
        s += "cross_lower_witness=" + pair_of(cross_lower.witness_i, cross_lower.witness_j) + "\n";
        s += "cross_upper_ok=" + std::string(flag(cross_upper.ok)) + "\n";
        s += "cross_upper_bound=" + format_value(cross_upper.bound) + "\n";
        s += "cross_upper_worst_ratio=" + format_value(cross_upper.worst_ratio) + "\n";
        s += "cross_upper_witness=" + pair_of(cross_upper.witness_i, cross_upper.witness_j) + "\n";
        s += "cross_distortion=" + format_value(cross_distortion) + "\n";
        s += "is_ultrametric=" + std::string(flag(is_ultrametric)) + "\n";
        s += "all_ok=" + std::string(flag(all_ok())) + "\n";
        return s;
    }
};

/// Checks a candidate extension against every guarantee of the operator for
/// the given D. rhobar is taken as a raw matrix so that broken candidates
/// (from files, or perturbed in tests) produce a failing report rather than
/// an exception.
inline ExtensionReport verify_extension(const FiniteMetricSpace& space, const SubsetSelection& subset,
                                        const Ultrametric& rho, const SquareMatrix& rhobar,
                                        double approx_factor) {
    if (subset.parent_size() != space.size() || rhobar.size() != space.size() ||
        rho.size() != subset.size()) {
        throw std::invalid_argument("verify_extension: dimension mismatch");
    }
    const std::size_t n = space.size();
    const double factor = approx_factor;
    ExtensionReport rep;
    rep.approx_factor = factor;

    // (1) restriction equality, bitwise
    for (std::size_t a = 0; a < subset.size() && rep.restriction_exact; ++a) {
        for (std::size_t b = 0; b < subset.size(); ++b) {
            if (rhobar(subset[a], subset[b]) != rho(a, b)) {
                rep.restriction_exact = false;
                break;
            }
        }
    }

    // (2) global lower bound, evaluated as written in 2D/(2(D+1)) form
    rep.global_lower.bound = (2.0 * factor) / (2.0 * (factor + 1.0));
    // (3) bounds on pairs with an endpoint in S
    rep.cross_lower.bound = (2.0 * factor) / (2.0 * factor + 1.0);
    rep.cross_upper.bound = 2.0 * factor;

    double cross_min = std::numeric_limits<double>::quiet_NaN();
    double cross_max = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = space(i, j);
            const double ratio = rhobar(i, j) / dij;
            if (std::isnan(rep.global_lower.worst_ratio) || ratio < rep.global_lower.worst_ratio) {
                rep.global_lower.worst_ratio = ratio;
                rep.global_lower.witness_i = i;
                rep.global_lower.witness_j = j;
            }
            if (!leq_within(rep.global_lower.bound * dij, rhobar(i, j))) rep.global_lower.ok = false;

            if (!subset.contains(i) && !subset.contains(j)) continue;
            if (std::isnan(cross_min) || ratio < cross_min) {
                cross_min = ratio;
                rep.cross_lower.worst_ratio = ratio;
                rep.cross_lower.witness_i = i;
                rep.cross_lower.witness_j = j;
            }
            if (std::isnan(cross_max) || ratio > cross_max) {
                cross_max = ratio;
                rep.cross_upper.worst_ratio = ratio;
                rep.cross_upper.witness_i = i;
                rep.cross_upper.witness_j = j;
            }
            if (!leq_within(rep.cross_lower.bound * dij, rhobar(i, j))) rep.cross_lower.ok = false;
            if (!leq_within(rhobar(i, j), rep.cross_upper.bound * dij)) rep.cross_upper.ok = false;
        }
    }
    if (!std::isnan(cross_min)) rep.cross_distortion = cross_max / cross_min;

    // axioms plus the full-triple strong-triangle scan
    try {
        validate_ultrametric(rhobar);
    } catch (const ValidationError& err) {
        rep.is_ultrametric = false;
        rep.ultrametric_witness = err.witness();
    }
    return rep;
}

}  // namespace umex
