#pragma once

// Shared constants and error types for the nclorentz library.
//
// Everything in this library works at desk scale: dense matrices with a few
// hundred rows at most, step functions with a few thousand pieces.  Tolerances
// below are absolute policy, referenced from one place so the whole tree
// agrees on what "equal", "zero rank" and "projection" mean numerically.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nclorentz {

inline constexpr const char* library_version = "0.1.0";

// Adjacent step-function values closer than this (relatively) are one plateau.
inline constexpr double value_merge_rel_tol = 1e-14;

// Singular values below rank_rel_tol * (largest singular value) are treated
// as numerical zeros when computing supports and singular value functions.
inline constexpr double rank_rel_tol = 1e-10;

// A matrix claiming to be an orthogonal projection may deviate from
// idempotence / self-adjointness by at most this much in operator norm.
inline constexpr double projection_tol = 1e-10;

// Two operators are bi-disjoint when the relevant support products vanish
// below this threshold (relative to the factors' norms).
inline constexpr double disjointness_tol = 1e-10;

// Raised when two operators that must share a tracial algebra do not.
class algebra_mismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a family that must be pairwise bi-disjoint is not; carries the
// offending pair of indices.
class disjointness_violation : public std::invalid_argument {
public:
    disjointness_violation(std::size_t i, std::size_t j, const std::string& what)
        : std::invalid_argument(what), first(i), second(j) {}

    std::size_t first;
    std::size_t second;
};

// Raised by the perturbation-envelope check when a perturbed element strays
// outside its per-index budget; carries the first offending index.
class perturbation_budget_error : public std::invalid_argument {
public:
    perturbation_budget_error(std::size_t k, const std::string& what)
        : std::invalid_argument(what), index(k) {}

    std::size_t index;
};

// Raised when an eigensolver fails to converge or a computation that should
// produce finite numbers does not.
class numeric_degeneracy : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by report writers when the output file cannot be created or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an input file parses as text but violates the expected schema
// or a type invariant; distinct from io_error so the CLI can map the two to
// different exit codes.
class input_format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nclorentz
