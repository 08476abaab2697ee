#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "umex/core.hpp"
#include "umex/extension.hpp"
#include "umex/matrix.hpp"
#include "umex/metric.hpp"
#include "umex/ultrametric.hpp"

namespace umex {

/// The worst-case family: the line metric on {0, ..., 2D+1} with the D+1 odd
/// points as the subset, carrying the uniform-2D ultrametric. Any extension
/// dominating the line distances on S x X pairs must stretch some such pair
/// by 2D+1, so the construction's 2D+1 cross distortion cannot be improved.
struct WorstCaseInstance {
    unsigned approx_factor;
    FiniteMetricSpace space;
    SubsetSelection subset;
    Ultrametric rho;
};

inline WorstCaseInstance worst_case_instance(unsigned approx_factor) {
    if (approx_factor < 1) throw std::invalid_argument("approximation factor must be at least 1");
    const unsigned d_factor = approx_factor;
    const std::size_t n = 2 * static_cast<std::size_t>(d_factor) + 2;
    FiniteMetricSpace space = path_metric(n);
    std::vector<std::size_t> odds;
    for (std::size_t i = 1; i < n; i += 2) odds.push_back(i);
    SubsetSelection subset(std::move(odds), n);
    Ultrametric rho = validate_ultrametric(uniform_offdiagonal(subset.size(), 2.0 * d_factor));
    // the uniform value 2D stretches the even subset distances 2..2D by
    // factors in [1, D]; confirm it really is a D-approximate ultrametric
    const double factor =
        approximation_parameters(rho, restrict_to(space, subset), PairScope::all()).factor_D;
    if (!leq_within(factor, static_cast<double>(d_factor))) {
        throw std::logic_error("worst_case_instance: subset ultrametric exceeds factor D");
    }
    return {d_factor, std::move(space), std::move(subset), std::move(rho)};
}

/// Max adjacent value max_i rhobar(i, i+1) of an ultrametric on the 2D+2
/// worst-case line points. Requires rhobar to dominate the line distances on
/// S x X pairs (checked; DominanceViolated names the (s, y) witness). The
/// strong triangle inequality along the chain forces the returned value to be
/// at least rhobar(0, 2D+1) >= 2D+1, and every adjacent pair has an odd
/// endpoint at line distance 1, so this certifies an S x X stretch >= 2D+1.
inline double chain_lower_bound(const Ultrametric& rhobar, unsigned approx_factor) {
    if (approx_factor < 1) throw std::invalid_argument("approximation factor must be at least 1");
    const std::size_t n = 2 * static_cast<std::size_t>(approx_factor) + 2;
    if (rhobar.size() != n) {
        throw std::invalid_argument("chain_lower_bound: expected " + std::to_string(n) + " points, got " +
                                    std::to_string(rhobar.size()));
    }
    auto in_subset = [](std::size_t i) { return i % 2 == 1; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!in_subset(i) && !in_subset(j)) continue;
            const double line = static_cast<double>(j - i);
            if (!leq_within(line, rhobar(i, j))) {
                const std::size_t s = in_subset(i) ? i : j;
                const std::size_t y = in_subset(i) ? j : i;
                throw ValidationError(Axiom::DominanceViolated, {s, y, 0},
                                      "DominanceViolated(" + std::to_string(s) + "," + std::to_string(y) +
                                          "): rhobar=" + format_value(rhobar(i, j)) +
                                          " < line distance " + format_value(line));
            }
        }
    }
    double max_adjacent = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) max_adjacent = std::max(max_adjacent, rhobar(i, i + 1));
    // chain consequence of the strong triangle inequality (generous slack for
    // long chains of toleranced comparisons)
    if (!leq_within(rhobar(0, n - 1), max_adjacent, 1e-7)) {
        throw std::logic_error("chain_lower_bound: adjacent maximum fell below rhobar(0, 2D+1)");
    }
    if (!leq_within(static_cast<double>(n - 1), rhobar(0, n - 1))) {
        throw std::logic_error("chain_lower_bound: dominance assertion failed at (0, 2D+1)");
    }
    return max_adjacent;
}

/// Box constraints on a candidate ultrametric: entrywise lower bounds,
/// optional entrywise upper bounds, and exact-equality requirements. Bounds
/// only tighten; an unsatisfiable box is legal input and simply infeasible.
class BoundConstraints {
public:
    explicit BoundConstraints(std::size_t n)
        : n_(n), lower_(n, 0.0), upper_(n, 0.0), bounded_(n * n, 0), equal_(n, 0.0), equal_mask_(n * n, 0) {}

    std::size_t size() const noexcept { return n_; }

    void require_lower(std::size_t i, std::size_t j, double value) {
        check_entry(i, j, value);
        lower_(i, j) = lower_(j, i) = std::max(lower_(i, j), value);
    }

    void require_upper(std::size_t i, std::size_t j, double value) {
        check_entry(i, j, value);
        const double v = has_upper(i, j) ? std::min(upper_(i, j), value) : value;
        upper_(i, j) = upper_(j, i) = v;
        bounded_[i * n_ + j] = bounded_[j * n_ + i] = 1;
    }

    /// Pins the entry exactly; implies the matching upper bound.
    void require_equal(std::size_t i, std::size_t j, double value) {
        check_entry(i, j, value);
        equal_(i, j) = equal_(j, i) = value;
        equal_mask_[i * n_ + j] = equal_mask_[j * n_ + i] = 1;
        require_upper(i, j, value);
    }

    double lower(std::size_t i, std::size_t j) const { return lower_(i, j); }
    bool has_upper(std::size_t i, std::size_t j) const { return bounded_[i * n_ + j] != 0; }
    double upper(std::size_t i, std::size_t j) const { return upper_(i, j); }
    bool has_equality(std::size_t i, std::size_t j) const { return equal_mask_[i * n_ + j] != 0; }
    double equality(std::size_t i, std::size_t j) const { return equal_(i, j); }

private:
    void check_entry(std::size_t i, std::size_t j, double value) const {
        if (i >= n_ || j >= n_) throw std::invalid_argument("constraint index out of range");
        if (i == j) throw std::invalid_argument("diagonal entries are pinned to zero");
        if (!std::isfinite(value) || value < 0.0) {
            throw std::invalid_argument("constraint values must be finite and nonnegative");
        }
    }

    std::size_t n_;
    SquareMatrix lower_;
    SquareMatrix upper_;
    std::vector<char> bounded_;
    SquareMatrix equal_;
    std::vector<char> equal_mask_;
};

struct FeasibilityResult {
    bool feasible = false;
    std::optional<Ultrametric> witness;
};

/// Whether an ultrametric exists inside the box. The minimax-path closure M
/// of the upper bounds is the pointwise-maximal ultrametric below them, so
/// the box contains an ultrametric iff M clears every lower bound and meets
/// every equality pin; M itself is then the witness. Unbounded entries are
/// absent edges for the closure; the bounded part must stay connected.
inline FeasibilityResult feasible_extension_exists(const BoundConstraints& constraints) {
    const std::size_t n = constraints.size();
    if (n == 0) throw std::invalid_argument("empty constraint system");
    constexpr double inf = std::numeric_limits<double>::infinity();
    SquareMatrix weights(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            weights(i, j) = weights(j, i) = constraints.has_upper(i, j) ? constraints.upper(i, j) : inf;
        }
    }
    SquareMatrix closure = detail::minimax_closure(weights);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!leq_within(constraints.lower(i, j), closure(i, j))) return {};
            if (constraints.has_equality(i, j) &&
                !eq_within(closure(i, j), constraints.equality(i, j))) {
                return {};
            }
        }
    }
    try {
        Ultrametric witness = validate_ultrametric(std::move(closure));
        return {true, std::move(witness)};
    } catch (const ValidationError&) {
        // a degenerate box (zero upper bounds) admits no genuine ultrametric
        return {};
    }
}

/// Box for "rhobar = rho_scale * rho on S x S and d <= rhobar <= stretch_cap * d
/// on S x X"; pairs with no endpoint in S stay unconstrained.
inline BoundConstraints extension_constraints(const FiniteMetricSpace& space,
                                              const SubsetSelection& subset, const Ultrametric& rho,
                                              double rho_scale, double stretch_cap) {
    if (subset.parent_size() != space.size()) {
        throw std::invalid_argument("subset does not match the space");
    }
    if (rho.size() != subset.size()) {
        throw std::invalid_argument("rho dimension does not match the subset");
    }
    const std::size_t n = space.size();
    BoundConstraints box(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto pi = subset.position_of(i);
            const auto pj = subset.position_of(j);
            if (!pi && !pj) continue;
            box.require_lower(i, j, space(i, j));
            box.require_upper(i, j, stretch_cap * space(i, j));
            if (pi && pj) box.require_equal(i, j, rho_scale * rho(*pi, *pj));
        }
    }
    return box;
}

struct OptimalDistortion {
    double stretch_cap = 1.0;   // t_opt: least worst-case S x X stretch
    double rho_scale = 1.0;     // c_opt: subset scaling realizing it
    Ultrametric witness;        // feasible within `resolution` of stretch_cap
};

/// Infimum t admitting an ultrametric rhobar with rhobar = c * rho on S x S
/// and d <= rhobar <= t * d on S x X pairs, over all c > 0, to absolute
/// `resolution`. Feasibility in t is monotone (the box only grows), so the
/// inner search is a plain bisection; the outer search over c is a 512-point
/// grid with golden-section refinement around the best grid cells. The grid
/// search is heuristic for arbitrary instances but exact on the worst-case
/// family and on full subsets, where the optimum sits on the grid edge.
inline OptimalDistortion optimal_extension_distortion(const FiniteMetricSpace& space,
                                                      const SubsetSelection& subset,
                                                      const Ultrametric& rho, double resolution) {
    constexpr std::size_t max_points = 16;
    const std::size_t n = space.size();
    if (n > max_points) {
        throw std::invalid_argument("optimal_extension_distortion handles at most " +
                                    std::to_string(max_points) + " points");
    }
    if (n < 2) throw std::invalid_argument("need at least 2 points");
    if (subset.parent_size() != n) throw std::invalid_argument("subset does not match the space");
    if (rho.size() != subset.size()) throw std::invalid_argument("rho dimension does not match the subset");
    if (!(resolution > 0.0) || !std::isfinite(resolution)) {
        throw std::invalid_argument("resolution must be positive");
    }

    double subset_factor = 1.0;
    double scale_lo = 1.0;
    if (subset.size() >= 2) {
        const FiniteMetricSpace on_subset = restrict_to(space, subset);
        const ApproximationReport rep = approximation_parameters(rho, on_subset, PairScope::all());
        subset_factor = rep.factor_D;
        // least c with c * rho >= d on S: below it the S x S pins already
        // undercut the required dominance
        scale_lo = 0.0;
        for (std::size_t a = 0; a < subset.size(); ++a) {
            for (std::size_t b = a + 1; b < subset.size(); ++b) {
                scale_lo = std::max(scale_lo, on_subset(a, b) / rho(a, b));
            }
        }
    }
    const double cap_max = 10.0 * (2.0 * subset_factor + 1.0);
    const double scale_hi = subset.size() >= 2 ? cap_max * scale_lo : scale_lo;

    struct Best {
        double cap = std::numeric_limits<double>::infinity();
        double estimate = std::numeric_limits<double>::infinity();
        double scale = 1.0;
        std::optional<Ultrametric> witness;
    } best;

    // min feasible t for a fixed c, bisected to `resolution`; infinity when
    // even cap_max fails. The infimum sits in (lo, hi], so the midpoint is
    // within resolution/2 of it; the witness comes from the feasible end.
    auto min_feasible_cap = [&](double rho_scale) {
        FeasibilityResult at_cap = feasible_extension_exists(
            extension_constraints(space, subset, rho, rho_scale, cap_max));
        if (!at_cap.feasible) return std::numeric_limits<double>::infinity();
        double lo = 0.0;
        double hi = cap_max;
        FeasibilityResult hi_result = std::move(at_cap);
        while (hi - lo > resolution) {
            const double mid = 0.5 * (lo + hi);
            FeasibilityResult r = feasible_extension_exists(
                extension_constraints(space, subset, rho, rho_scale, mid));
            if (r.feasible) {
                hi = mid;
                hi_result = std::move(r);
            } else {
                lo = mid;
            }
        }
        if (hi < best.cap) best = {hi, 0.5 * (lo + hi), rho_scale, std::move(hi_result.witness)};
        return hi;
    };

    constexpr std::size_t grid_points = 512;
    std::vector<double> grid;
    std::vector<double> cap_at;
    if (scale_hi > scale_lo) {
        grid.reserve(grid_points);
        for (std::size_t k = 0; k < grid_points; ++k) {
            grid.push_back(scale_lo + (scale_hi - scale_lo) *
                                          (static_cast<double>(k) / (grid_points - 1)));
        }
    } else {
        grid.push_back(scale_lo);
    }
    cap_at.reserve(grid.size());
    for (double c : grid) cap_at.push_back(min_feasible_cap(c));

    // golden-section refinement around the most promising grid cells
    std::vector<std::size_t> minima;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::isinf(cap_at[k])) continue;
        const bool left_ok = k == 0 || cap_at[k] <= cap_at[k - 1];
        const bool right_ok = k + 1 == grid.size() || cap_at[k] <= cap_at[k + 1];
        if (left_ok && right_ok) minima.push_back(k);
    }
    std::sort(minima.begin(), minima.end(),
              [&](std::size_t a, std::size_t b) { return cap_at[a] < cap_at[b]; });
    if (minima.size() > 8) minima.resize(8);

    constexpr double golden = 0.6180339887498949;
    for (std::size_t k : minima) {
        double a = grid[k == 0 ? 0 : k - 1];
        double b = grid[std::min(k + 1, grid.size() - 1)];
        if (b - a <= resolution) continue;
        double x1 = b - golden * (b - a);
        double x2 = a + golden * (b - a);
        double f1 = min_feasible_cap(x1);
        double f2 = min_feasible_cap(x2);
        while (b - a > resolution) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - golden * (b - a);
                f1 = min_feasible_cap(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + golden * (b - a);
                f2 = min_feasible_cap(x2);
            }
        }
    }

    if (!best.witness) {
        throw std::runtime_error("no extension meets the stretch cap " + format_value(cap_max));
    }
    return {best.estimate, best.scale, std::move(*best.witness)};
}

}  // namespace umex
