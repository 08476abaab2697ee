#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace umex {

/// Relative slack used by every axiom and bound check. Instances generated by
/// this library are exact in double precision; the slack only guards
/// user-supplied data.
inline constexpr double rel_tolerance = 1e-9;

/// a <= b up to `rel` of the larger magnitude.
inline bool leq_within(double a, double b, double rel = rel_tolerance) {
    return a <= b + rel * std::max(std::abs(a), std::abs(b));
}

/// |a - b| <= rel of the larger magnitude.
inline bool eq_within(double a, double b, double rel = rel_tolerance) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// Axioms and operator preconditions that validation can report as violated.
enum class Axiom {
    NonfiniteEntry,
    NonzeroDiagonal,
    AsymmetricEntry,
    NonpositiveOffDiagonal,
    TriangleViolation,
    StrongTriangleViolation,
    HypothesisViolated,
    DominanceViolated,
};

inline const char* axiom_name(Axiom axiom) {
    switch (axiom) {
        case Axiom::NonfiniteEntry: return "NonfiniteEntry";
        case Axiom::NonzeroDiagonal: return "NonzeroDiagonal";
        case Axiom::AsymmetricEntry: return "AsymmetricEntry";
        case Axiom::NonpositiveOffDiagonal: return "NonpositiveOffDiagonal";
        case Axiom::TriangleViolation: return "TriangleViolation";
        case Axiom::StrongTriangleViolation: return "StrongTriangleViolation";
        case Axiom::HypothesisViolated: return "HypothesisViolated";
        case Axiom::DominanceViolated: return "DominanceViolated";
    }
    return "UnknownAxiom";
}

/// Validation failure naming the violated axiom and a witness index triple
/// (unused trailing slots are zero).
class ValidationError : public std::runtime_error {
public:
    ValidationError(Axiom axiom, std::array<std::size_t, 3> witness, const std::string& message)
        : std::runtime_error(message), axiom_(axiom), witness_(witness) {}

    Axiom axiom() const noexcept { return axiom_; }
    const std::array<std::size_t, 3>& witness() const noexcept { return witness_; }

private:
    Axiom axiom_;
    std::array<std::size_t, 3> witness_;
};

/// Malformed text input (matrix or index-list files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace umex
