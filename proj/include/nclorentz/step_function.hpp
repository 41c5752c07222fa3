#pragma once

// Decreasing step functions on [0, infinity) and finitely supported simple
// functions.  These are the commutative backbone of the library: a singular
// value function is stored as a step_function, and every norm, distance and
// majorization question eventually lands here.
//
// A step_function is a finite list of (value, width) pieces laid end to end
// from t = 0, values strictly decreasing and positive; the function is zero
// beyond the last piece.  The constructor canonicalizes arbitrary piece
// lists, so two step_functions are equal as functions exactly when their
// piece lists compare equal.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "nclorentz/common.hpp"

namespace nclorentz {

struct piece {
    double value = 0.0;
    double width = 0.0;

    friend bool operator==(const piece&, const piece&) = default;
};

class step_function {
public:
    // The zero function.
    step_function() = default;

    // Canonicalizes: sorts values downward, drops zero-width and zero-value
    // pieces, merges adjacent values that agree to within value_merge_rel_tol
    // (relative).  Negative or non-finite values and widths are rejected.
    explicit step_function(std::vector<piece> raw) {
        for (const piece& pc : raw) {
            if (!std::isfinite(pc.value) || !std::isfinite(pc.width))
                throw std::invalid_argument("step_function: non-finite piece");
            if (pc.value < 0.0)
                throw std::invalid_argument("step_function: negative value");
            if (pc.width < 0.0)
                throw std::invalid_argument("step_function: negative width");
        }
        std::stable_sort(raw.begin(), raw.end(),
                         [](const piece& a, const piece& b) { return a.value > b.value; });
        for (const piece& pc : raw) {
            if (pc.value == 0.0 || pc.width == 0.0) continue;
            if (!pieces_.empty() &&
                pieces_.back().value - pc.value <=
                    value_merge_rel_tol * pieces_.back().value) {
                pieces_.back().width += pc.width;  // same plateau
            } else {
                pieces_.push_back(pc);
            }
        }
    }

    const std::vector<piece>& pieces() const { return pieces_; }

    bool is_zero() const { return pieces_.empty(); }

    // Total length of the support.
    double total_width() const {
        double w = 0.0;
        for (const piece& pc : pieces_) w += pc.width;
        return w;
    }

    // Right-continuous evaluation: value of the function at t >= 0.
    double value_at(double t) const {
        if (!(t >= 0.0)) throw std::invalid_argument("value_at: t must be >= 0");
        double edge = 0.0;
        for (const piece& pc : pieces_) {
            edge += pc.width;
            if (t < edge) return pc.value;
        }
        return 0.0;
    }

    // Integral of the function over [0, t]; constant in t past the support.
    double head_integral(double t) const {
        if (!(t >= 0.0)) throw std::invalid_argument("head_integral: t must be >= 0");
        double acc = 0.0;
        double left = 0.0;
        for (const piece& pc : pieces_) {
            const double right = left + pc.width;
            if (t <= right) {
                acc += pc.value * (t - left);
                return acc;
            }
            acc += pc.value * pc.width;
            left = right;
        }
        return acc;
    }

    double l1() const { return head_integral(total_width()); }

    // Cumulative right endpoints t_1 < t_2 < ... < t_m of the pieces.
    std::vector<double> breakpoints() const {
        std::vector<double> ts;
        ts.reserve(pieces_.size());
        double edge = 0.0;
        for (const piece& pc : pieces_) {
            edge += pc.width;
            ts.push_back(edge);
        }
        return ts;
    }

    friend bool operator==(const step_function&, const step_function&) = default;

private:
    std::vector<piece> pieces_;
};

struct atom {
    std::complex<double> value;
    double weight = 0.0;
};

// A finitely supported function on a measure space, kept as an unordered bag
// of (value, weight) atoms.  Weights must be strictly positive; values may be
// complex and may repeat.
class simple_function {
public:
    simple_function() = default;

    explicit simple_function(std::vector<atom> atoms) : atoms_(std::move(atoms)) {
        for (const atom& a : atoms_) {
            if (!std::isfinite(a.value.real()) || !std::isfinite(a.value.imag()) ||
                !std::isfinite(a.weight))
                throw std::invalid_argument("simple_function: non-finite atom");
            if (a.weight <= 0.0)
                throw std::invalid_argument("simple_function: weight must be > 0");
        }
    }

    const std::vector<atom>& atoms() const { return atoms_; }

private:
    std::vector<atom> atoms_;
};

// Decreasing rearrangement of |f|: atoms become pieces sorted by modulus.
inline step_function rearrange(const simple_function& f) {
    std::vector<piece> pcs;
    pcs.reserve(f.atoms().size());
    for (const atom& a : f.atoms()) pcs.push_back({std::abs(a.value), a.weight});
    return step_function(std::move(pcs));
}

// Pointwise scaling by |c|; rearrangement commutes with scalar multiples.
inline step_function scale(const step_function& f, double c) {
    const double m = std::abs(c);
    std::vector<piece> pcs;
    pcs.reserve(f.pieces().size());
    for (const piece& pc : f.pieces()) pcs.push_back({m * pc.value, pc.width});
    return step_function(std::move(pcs));
}

// f |-> f^p on values, widths untouched.  Needs p > 0 so order is preserved.
inline step_function power_transform(const step_function& f, double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("power_transform: exponent must be in (0, inf)");
    std::vector<piece> pcs;
    pcs.reserve(f.pieces().size());
    for (const piece& pc : f.pieces()) pcs.push_back({std::pow(pc.value, p), pc.width});
    return step_function(std::move(pcs));
}

// Rearrangement of a sum of disjointly supported functions: supports do not
// overlap, so the pieces simply pool together and re-sort.
inline step_function disjoint_sum(std::span<const step_function> fs) {
    std::vector<piece> pcs;
    for (const step_function& f : fs)
        pcs.insert(pcs.end(), f.pieces().begin(), f.pieces().end());
    return step_function(std::move(pcs));
}

// Rearrangement of sum c_k f_k with disjoint supports; each summand is
// scaled by |c_k| first.
inline step_function disjoint_sum(std::span<const step_function> fs,
                                  std::span<const std::complex<double>> coeffs) {
    if (fs.size() != coeffs.size())
        throw std::invalid_argument("disjoint_sum: coefficient count mismatch");
    std::vector<piece> pcs;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const double m = std::abs(coeffs[k]);
        for (const piece& pc : fs[k].pieces()) pcs.push_back({m * pc.value, pc.width});
    }
    return step_function(std::move(pcs));
}

// Hardy-Littlewood submajorization: every head integral of g is dominated by
// the matching head integral of f.  Both head integrals are piecewise linear
// with kinks only at piece boundaries, so checking the pooled breakpoints
// (plus the far end of both supports) decides the relation exactly.
inline bool submajorizes(const step_function& f, const step_function& g) {
    std::vector<double> ts = f.breakpoints();
    const std::vector<double> gs = g.breakpoints();
    ts.insert(ts.end(), gs.begin(), gs.end());
    ts.push_back(std::max(f.total_width(), g.total_width()));
    std::sort(ts.begin(), ts.end());
    for (double t : ts)
        if (g.head_integral(t) > f.head_integral(t)) return false;
    return true;
}

// Uniform distance between two step functions: the largest pointwise gap,
// found by evaluating on the midpoints of the interval partition both
// functions induce together (both are constant between consecutive pooled
// breakpoints).
inline double sup_distance(const step_function& f, const step_function& g) {
    std::vector<double> ts = f.breakpoints();
    const std::vector<double> gs = g.breakpoints();
    ts.insert(ts.end(), gs.begin(), gs.end());
    std::sort(ts.begin(), ts.end());
    double best = 0.0;
    double prev = 0.0;
    for (double t : ts) {
        if (t > prev) {
            const double mid = prev + (t - prev) / 2.0;
            best = std::max(best, std::abs(f.value_at(mid) - g.value_at(mid)));
            prev = t;
        }
    }
    return best;
}

// Distance-to-zero in the measure topology: the least t >= 0 with
// value_at(t) <= t.  The inequality can only start holding at a piece
// boundary or where a plateau crosses the diagonal, so one scan suffices.
inline double measure_distance(const step_function& f) {
    double left = 0.0;
    for (const piece& pc : f.pieces()) {
        const double right = left + pc.width;
        if (pc.value <= left) return left;       // diagonal already above the plateau
        if (pc.value < right) return pc.value;   // plateau crosses the diagonal
        left = right;
    }
    return left;  // first t past the support where the function is 0 <= t
}

}  // namespace nclorentz
