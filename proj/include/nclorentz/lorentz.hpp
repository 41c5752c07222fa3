#pragma once

// Lorentz quasi-norms on decreasing step functions and on finite sequences,
// plus empirical convexity / concavity / disjoint-estimate constants.
//
// For an index (p, q) with p in (0, inf) and q in (0, inf], the quasi-norm of
// a decreasing step function f with values v_1 > ... > v_m on cumulative
// breakpoints t_0 = 0 < t_1 < ... < t_m is evaluated in closed form:
//
//   q < inf :  ( sum_i v_i^q * (t_i^(q/p) - t_(i-1)^(q/p)) )^(1/q)
//   q = inf :  max_i v_i * t_i^(1/p)
//
// which is exactly the integral of (t^(1/p-1/q) f(t))^q dt * (q/p) resummed
// piece by piece.  Sequences are the widths-one special case.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "nclorentz/step_function.hpp"

namespace nclorentz {

struct lorentz_index {
    double p = 1.0;
    double q = 1.0;

    static constexpr double infinite_q = std::numeric_limits<double>::infinity();

    lorentz_index(double p_, double q_) : p(p_), q(q_) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("lorentz_index: p must be in (0, inf)");
        if (!(q > 0.0) || std::isnan(q))
            throw std::invalid_argument("lorentz_index: q must be in (0, inf]");
    }

    bool q_finite() const { return std::isfinite(q); }

    friend bool operator==(const lorentz_index&, const lorentz_index&) = default;
};

inline double lorentz_norm(const step_function& f, const lorentz_index& idx) {
    if (f.is_zero()) return 0.0;
    const double qp = idx.q_finite() ? idx.q / idx.p : 0.0;
    if (idx.q_finite()) {
        double acc = 0.0;
        double prev_pow = 0.0;  // t_0^(q/p) with t_0 = 0
        double edge = 0.0;
        for (const piece& pc : f.pieces()) {
            edge += pc.width;
            const double edge_pow = std::pow(edge, qp);
            acc += std::pow(pc.value, idx.q) * (edge_pow - prev_pow);
            prev_pow = edge_pow;
        }
        return std::pow(acc, 1.0 / idx.q);
    }
    double best = 0.0;
    double edge = 0.0;
    for (const piece& pc : f.pieces()) {
        edge += pc.width;
        best = std::max(best, pc.value * std::pow(edge, 1.0 / idx.p));
    }
    return best;
}

// Lorentz sequence quasi-norm: moduli sorted downward, weighted by the
// discrete increments k^(q/p) - (k-1)^(q/p).  Finite q only; the q = inf
// companion is lorentz_norm over a widths-one step function.
inline double lorentz_sequence_norm(std::span<const double> xs, const lorentz_index& idx) {
    if (!idx.q_finite())
        throw std::invalid_argument("lorentz_sequence_norm: q must be finite");
    std::vector<double> mags;
    mags.reserve(xs.size());
    for (double x : xs) {
        if (!std::isfinite(x))
            throw std::invalid_argument("lorentz_sequence_norm: non-finite entry");
        mags.push_back(std::abs(x));
    }
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    const double qp = idx.q / idx.p;
    double acc = 0.0;
    double prev_pow = 0.0;
    for (std::size_t k = 0; k < mags.size(); ++k) {
        if (mags[k] == 0.0) break;
        const double kp = std::pow(static_cast<double>(k + 1), qp);
        acc += std::pow(mags[k], idx.q) * (kp - prev_pow);
        prev_pow = kp;
    }
    return std::pow(acc, 1.0 / idx.q);
}

inline double lorentz_sequence_norm(std::span<const std::complex<double>> xs,
                                    const lorentz_index& idx) {
    std::vector<double> mags;
    mags.reserve(xs.size());
    for (const std::complex<double>& x : xs) mags.push_back(std::abs(x));
    return lorentz_sequence_norm(std::span<const double>(mags), idx);
}

// ----- empirical constants ------------------------------------------------

// The four estimate families measured by estimate_constant.  Convexity and
// concavity act on pointwise lattice expressions over a shared grid; upper
// and lower estimates act on sums of disjointly supported functions.  The
// "p" in the names is the generic exponent passed alongside the kind, not
// the p of the Lorentz index.
enum class estimate_kind {
    p_convexity,     // || (sum |f_n|^r)^(1/r) ||  vs  ( sum ||f_n||^r )^(1/r)
    p_concavity,     // same two sides, opposite inequality
    upper_estimate,  // || sum f_n ||, disjoint supports  vs  (sum ||f_n||^r)^(1/r)
    lower_estimate,
};

// A family of nonnegative functions on one common finite atom grid: member i
// takes value members[i][j] on an atom of weight weights[j].  Lattice
// operations are evaluated atom by atom.
struct grid_family {
    std::vector<double> weights;
    std::vector<std::vector<double>> members;

    void validate() const {
        if (members.empty()) throw std::invalid_argument("grid_family: no members");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw std::invalid_argument("grid_family: weights must be > 0");
        for (const std::vector<double>& m : members)
            if (m.size() != weights.size())
                throw std::invalid_argument("grid_family: member off the common grid");
    }

    step_function member_rearrangement(std::size_t i) const {
        std::vector<piece> pcs;
        pcs.reserve(weights.size());
        for (std::size_t j = 0; j < weights.size(); ++j)
            pcs.push_back({std::abs(members[i][j]), weights[j]});
        return step_function(std::move(pcs));
    }

    // Rearrangement of ( sum_i |f_i|^r )^(1/r), evaluated atomwise.  A
    // singleton family bypasses the pow round trip so its lattice mean is
    // bit-identical to the member and degenerate ratios come out exactly 1.
    step_function lattice_power_mean(double r) const {
        if (members.size() == 1) return member_rearrangement(0);
        std::vector<piece> pcs;
        pcs.reserve(weights.size());
        for (std::size_t j = 0; j < weights.size(); ++j) {
            double acc = 0.0;
            for (const std::vector<double>& m : members)
                acc += std::pow(std::abs(m[j]), r);
            pcs.push_back({std::pow(acc, 1.0 / r), weights[j]});
        }
        return step_function(std::move(pcs));
    }
};

// A family of step functions regarded as having pairwise disjoint supports.
struct disjoint_family {
    std::vector<step_function> members;
};

namespace detail {

inline double power_mean_sum(std::span<const double> norms, double r) {
    if (norms.size() == 1) return norms[0];  // exact, avoids pow round-trip noise
    double acc = 0.0;
    for (double v : norms) acc += std::pow(v, r);
    return std::pow(acc, 1.0 / r);
}

// ratio > 0 only when both sides carry mass; degenerate families score 1.
inline double guarded_ratio(double num, double den) {
    if (num == 0.0 && den == 0.0) return 1.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}

}  // namespace detail

// Ratio whose supremum over families is the estimate constant: the side that
// the named inequality bounds from above is the numerator, so the constant
// is always sup(ratio) and the inequality holds with constant C exactly when
// every ratio is <= C.
inline double estimate_ratio(estimate_kind kind, double r, const lorentz_index& idx,
                             const grid_family& fam) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("estimate_ratio: exponent must be in (0, inf)");
    fam.validate();
    if (kind != estimate_kind::p_convexity && kind != estimate_kind::p_concavity)
        throw std::invalid_argument("estimate_ratio: grid families measure convexity kinds only");
    const double mixed = lorentz_norm(fam.lattice_power_mean(r), idx);
    std::vector<double> norms;
    norms.reserve(fam.members.size());
    for (std::size_t i = 0; i < fam.members.size(); ++i)
        norms.push_back(lorentz_norm(fam.member_rearrangement(i), idx));
    const double split = detail::power_mean_sum(norms, r);
    return kind == estimate_kind::p_convexity ? detail::guarded_ratio(mixed, split)
                                              : detail::guarded_ratio(split, mixed);
}

inline double estimate_ratio(estimate_kind kind, double r, const lorentz_index& idx,
                             const disjoint_family& fam) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("estimate_ratio: exponent must be in (0, inf)");
    if (fam.members.empty()) throw std::invalid_argument("estimate_ratio: no members");
    if (kind != estimate_kind::upper_estimate && kind != estimate_kind::lower_estimate)
        throw std::invalid_argument("estimate_ratio: disjoint families measure estimate kinds only");
    const double whole = lorentz_norm(disjoint_sum(fam.members), idx);
    std::vector<double> norms;
    norms.reserve(fam.members.size());
    for (const step_function& f : fam.members) norms.push_back(lorentz_norm(f, idx));
    const double split = detail::power_mean_sum(norms, r);
    return kind == estimate_kind::upper_estimate ? detail::guarded_ratio(whole, split)
                                                 : detail::guarded_ratio(split, whole);
}

template <class Family>
struct constant_estimate {
    double ratio_max = 0.0;
    Family witness;         // family attaining ratio_max
    std::size_t samples = 0;
};

template <class Family>
constant_estimate<Family> estimate_constant(estimate_kind kind, double r,
                                            const lorentz_index& idx,
                                            std::span<const Family> families) {
    if (families.empty())
        throw std::invalid_argument("estimate_constant: need at least one family");
    constant_estimate<Family> best;
    best.samples = families.size();
    best.ratio_max = -1.0;
    for (const Family& fam : families) {
        const double ratio = estimate_ratio(kind, r, idx, fam);
        if (ratio > best.ratio_max) {
            best.ratio_max = ratio;
            best.witness = fam;
        }
    }
    return best;
}

}  // namespace nclorentz
