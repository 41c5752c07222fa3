#pragma once

// Empirical embedding evidence: distortion of coefficient maps, transfer of
// bi-disjoint operator families to disjoint commutative ones, spike families
// realizing Lorentz sequence norms, and the two-sided perturbation envelope
// for almost-disjoint families.
//
// The distortion of a family (x_k) against a target exponent r is the spread
// of || sum a_k x_k || / ||a||_r over a finite bank of coefficient vectors.
// The bank always contains the unit vectors, the all-ones vector, a lacunary
// vector and a harmonic-decay vector (all normalized in ell_r); callers can
// append their own.  A spread close to 1 is evidence that a subspace close
// to ell_r sits inside the ambient space; a spread that grows without bound
// along a ladder of family sizes is evidence that no such copy exists.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nclorentz/common.hpp"
#include "nclorentz/lorentz.hpp"
#include "nclorentz/operator_matrix.hpp"
#include "nclorentz/step_function.hpp"

namespace nclorentz {

using coefficient_vector = std::vector<std::complex<double>>;

struct distortion_report {
    double lower = 0.0;  // min over the bank of ||sum a_k x_k|| / ||a||_r
    double upper = 0.0;  // max over the bank
    std::size_t sample_count = 0;
    coefficient_vector worst_low;   // vector attaining lower
    coefficient_vector worst_high;  // vector attaining upper

    double distortion() const { return lower > 0.0 ? upper / lower : 0.0; }
};

namespace detail {

inline double ell_r_norm(std::span<const std::complex<double>> a, double r) {
    double acc = 0.0;
    for (const std::complex<double>& v : a) acc += std::pow(std::abs(v), r);
    return std::pow(acc, 1.0 / r);
}

template <class Evaluate>
distortion_report distortion_scan(std::size_t n, double r, const Evaluate& image_norm,
                                  std::span<const coefficient_vector> extra) {
    std::vector<coefficient_vector> bank;
    // Unit vectors.
    for (std::size_t k = 0; k < n; ++k) {
        coefficient_vector e(n, 0.0);
        e[k] = 1.0;
        bank.push_back(std::move(e));
    }
    // All ones.
    bank.emplace_back(n, 1.0);
    // Lacunary decay 2^-(k+1)/r: mass concentrates on the first entries.
    {
        coefficient_vector v(n);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = std::pow(2.0, -static_cast<double>(k + 1) / r);
        bank.push_back(std::move(v));
    }
    // Harmonic decay (k+1)^-1/r: the slowest decay outside ell_r.
    {
        coefficient_vector v(n);
        for (std::size_t k = 0; k < n; ++k)
            v[k] = std::pow(static_cast<double>(k + 1), -1.0 / r);
        bank.push_back(std::move(v));
    }
    for (const coefficient_vector& v : extra) {
        if (v.size() != n)
            throw std::invalid_argument("distortion: extra vector has wrong length");
        bank.push_back(v);
    }

    distortion_report report;
    report.sample_count = bank.size();
    bool first = true;
    for (const coefficient_vector& a : bank) {
        const double base = ell_r_norm(a, r);
        if (base == 0.0)
            throw std::invalid_argument("distortion: zero coefficient vector");
        const double ratio = image_norm(a) / base;
        if (first || ratio < report.lower) {
            report.lower = ratio;
            report.worst_low = a;
        }
        if (first || ratio > report.upper) {
            report.upper = ratio;
            report.worst_high = a;
        }
        first = false;
    }
    return report;
}

}  // namespace detail

// The documented coefficient bank for family size n and target exponent r,
// in scan order.  Exposed so callers can reproduce or extend the scan.
inline std::vector<coefficient_vector> standard_sample_vectors(std::size_t n, double r) {
    std::vector<coefficient_vector> bank;
    auto collect = [&](const coefficient_vector& a) {
        bank.push_back(a);
        return 1.0;
    };
    detail::distortion_scan(n, r, collect, {});
    return bank;
}

// Distortion of an operator family in S_(p,q) against ell_r.
inline distortion_report distortion(std::span<const operator_matrix> xs, double r,
                                    const lorentz_index& idx,
                                    std::span<const coefficient_vector> extra = {}) {
    if (xs.empty()) throw std::invalid_argument("distortion: empty family");
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("distortion: target exponent must be in (0, inf)");
    return detail::distortion_scan(
        xs.size(), r,
        [&](const coefficient_vector& a) {
            operator_matrix sum = operator_matrix::zero(xs[0].algebra());
            for (std::size_t k = 0; k < xs.size(); ++k) sum = sum + a[k] * xs[k];
            return schatten_lorentz_norm(sum, idx);
        },
        extra);
}

// Distortion of a disjointly supported commutative family in L_(p,q).
inline distortion_report distortion(std::span<const step_function> fs, double r,
                                    const lorentz_index& idx,
                                    std::span<const coefficient_vector> extra = {}) {
    if (fs.empty()) throw std::invalid_argument("distortion: empty family");
    if (!(r > 0.0) || !std::isfinite(r))
        throw std::invalid_argument("distortion: target exponent must be in (0, inf)");
    return detail::distortion_scan(
        fs.size(), r,
        [&](const coefficient_vector& a) { return lorentz_norm(disjoint_sum(fs, a), idx); },
        extra);
}

// A step function placed at an offset on the half line; placements produced
// by disjoint_transfer occupy consecutive intervals, so distinct entries
// have disjoint supports.
struct placed_function {
    step_function shape;
    double offset = 0.0;
};

// Transfer of a pairwise bi-disjoint operator family to a disjoint
// commutative family: member k becomes its own singular value function,
// placed after the supports of members 1..k-1.  Coefficient sums on either
// side then have identical Lorentz norms, which is the isometric half of the
// embedding story.  Families that are not bi-disjoint are rejected with the
// offending pair.
inline std::vector<placed_function> disjoint_transfer(std::span<const operator_matrix> xs) {
    if (xs.empty()) throw std::invalid_argument("disjoint_transfer: empty family");
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (!disjointness(xs[i], xs[j]).bidisjoint())
                throw disjointness_violation(
                    i, j, "disjoint_transfer: members " + std::to_string(i) + " and " +
                              std::to_string(j) + " are not bi-disjoint");
    std::vector<placed_function> out;
    out.reserve(xs.size());
    double offset = 0.0;
    for (const operator_matrix& x : xs) {
        placed_function placed{mu_op(x), offset};
        offset += placed.shape.total_width();
        out.push_back(std::move(placed));
    }
    return out;
}

// Spike family realizing the ell_q structure inside L_(p,q): member k is a
// single plateau of height s_k^(-1/p) on support size s_k = lambda^k.  A
// single plateau (v, w) has norm (v^q w^(q/p))^(1/q), so each spike has
// Lorentz norm exactly 1.  As lambda -> 0 the spikes separate in scale and
// their coefficient map approaches an isometry onto ell_q.
inline std::vector<step_function> build_lq_spikes(const lorentz_index& idx, std::size_t n,
                                                  double lacunarity) {
    if (n < 1) throw std::invalid_argument("build_lq_spikes: need n >= 1");
    if (!(lacunarity > 0.0) || !(lacunarity < 1.0))
        throw std::invalid_argument("build_lq_spikes: lacunarity must be in (0, 1)");
    // Heights lambda^(-k/p) enter norms raised to q (or taken at width^(1/p)
    // for q = inf); refuse ladders that would leave double range.
    const double q_eff = idx.q_finite() ? idx.q : 1.0;
    const double extreme = static_cast<double>(n) *
                           std::abs(std::log10(lacunarity)) *
                           std::max({1.0, q_eff / idx.p, q_eff});
    if (extreme > 280.0)
        throw std::invalid_argument("build_lq_spikes: ladder exhausts double range");
    std::vector<step_function> out;
    out.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double width = std::pow(lacunarity, static_cast<double>(k));
        const double height = std::pow(width, -1.0 / idx.p);
        out.emplace_back(std::vector<piece>{{height, width}});
    }
    return out;
}

// Two-sided perturbation envelope for near-disjoint families.  Given exact
// bi-disjoint anchors d_k with S_(p,p) norms delta_k and perturbed elements
// y_k with ||y_k - d_k||_p <= eps_k * 2^-k * delta_k (k counted from 1), the
// normalized family y_k / delta_k satisfies, for every coefficient vector a,
//
//   ||a||_p - ||a . eps||_p  <=  || sum a_k y_k / delta_k ||_p
//                            <=  ||a||_p + ||a . eps||_p
//
// where (a . eps)_k = a_k eps_k.  The Hoelder step behind the envelope needs
// a conjugate exponent, so p < 1 is rejected; p = 2 is rejected as well
// because every surrounding equivalence statement excludes it.  Budget
// violations report the first offending index; envelope failures return
// false.
inline bool perturbation_envelope(std::span<const operator_matrix> ys,
                                  std::span<const operator_matrix> ds, double p,
                                  std::span<const double> eps,
                                  std::span<const coefficient_vector> vectors,
                                  double rel_slack = 1e-9) {
    if (ys.empty()) throw std::invalid_argument("perturbation_envelope: empty family");
    if (ys.size() != ds.size() || ys.size() != eps.size())
        throw std::invalid_argument("perturbation_envelope: family size mismatch");
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("perturbation_envelope: p must be in [1, inf)");
    if (p == 2.0)
        throw std::invalid_argument("perturbation_envelope: p = 2 is excluded");
    for (double e : eps)
        if (!(e >= 0.0) || !std::isfinite(e))
            throw std::invalid_argument("perturbation_envelope: eps entries must be >= 0");
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = i + 1; j < ds.size(); ++j)
            if (!disjointness(ds[i], ds[j]).bidisjoint())
                throw disjointness_violation(
                    i, j, "perturbation_envelope: anchors " + std::to_string(i) + " and " +
                              std::to_string(j) + " are not bi-disjoint");

    const lorentz_index pp(p, p);
    std::vector<double> delta(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        delta[k] = schatten_lorentz_norm(ds[k], pp);
        if (delta[k] == 0.0)
            throw std::invalid_argument("perturbation_envelope: zero anchor");
        const double drift = schatten_lorentz_norm(ys[k] - ds[k], pp);
        const double budget = eps[k] * std::pow(2.0, -static_cast<double>(k + 1)) * delta[k];
        if (drift > budget * (1.0 + 1e-12) + 1e-300)
            throw perturbation_budget_error(
                k, "perturbation_envelope: element " + std::to_string(k) +
                       " exceeds its perturbation budget");
    }

    for (const coefficient_vector& a : vectors) {
        if (a.size() != ys.size())
            throw std::invalid_argument("perturbation_envelope: vector length mismatch");
        operator_matrix sum = operator_matrix::zero(ys[0].algebra());
        for (std::size_t k = 0; k < ys.size(); ++k)
            sum = sum + (a[k] / delta[k]) * ys[k];
        const double value = schatten_lorentz_norm(sum, pp);
        double base = 0.0, spread = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            base += std::pow(std::abs(a[k]), p);
            spread += std::pow(std::abs(a[k]) * eps[k], p);
        }
        base = std::pow(base, 1.0 / p);
        spread = std::pow(spread, 1.0 / p);
        const double slack = rel_slack * std::max(base, 1.0);
        if (value < base - spread - slack || value > base + spread + slack) return false;
    }
    return true;
}

}  // namespace nclorentz
