#pragma once

// Rademacher averages of operator families: second moments of random sign
// sums, Khintchine-type ratios against the square function, and an empirical
// cotype-2 ratio.
//
// Up to the exact budget (20 signs, about a million patterns) the average is
// an exact enumeration over all sign patterns in a fixed order, so results
// are reproducible to the last bit.  Beyond that the caller must opt into
// Monte Carlo sampling with an explicit seed.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "nclorentz/lorentz.hpp"
#include "nclorentz/operator_matrix.hpp"
#include "nclorentz/rng.hpp"

namespace nclorentz {

struct sign_pattern {
    std::vector<int> signs;  // entries are +1 or -1

    static sign_pattern from_mask(std::uint64_t mask, std::size_t n) {
        sign_pattern out;
        out.signs.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
            out.signs.push_back((mask >> k) & 1u ? -1 : +1);
        return out;
    }
};

enum class average_mode { exact, monte_carlo };

struct average_spec {
    average_mode mode = average_mode::exact;
    std::size_t samples = 0;   // monte_carlo draws; ignored for exact
    std::uint64_t seed = 0;    // monte_carlo stream; ignored for exact

    // Largest family size enumerated exactly (2^20 patterns).
    static constexpr std::size_t exact_budget = 20;
};

namespace detail {

template <class Visit>
void for_each_pattern(std::size_t n, const average_spec& spec, Visit&& visit) {
    if (n == 0) throw std::invalid_argument("rademacher average: empty family");
    if (spec.mode == average_mode::exact) {
        if (n > average_spec::exact_budget)
            throw std::invalid_argument(
                "rademacher average: family too large for exact enumeration; "
                "use monte_carlo");
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t mask = 0; mask < total; ++mask) visit(mask);
    } else {
        if (spec.samples == 0)
            throw std::invalid_argument("rademacher average: monte_carlo needs samples > 0");
        if (n > 64)
            throw std::invalid_argument("rademacher average: at most 64 signs supported");
        seeded_rng rng(spec.seed);
        const std::uint64_t keep = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
        for (std::size_t s = 0; s < spec.samples; ++s) visit(rng.next_u64() & keep);
    }
}

}  // namespace detail

// E_eps || sum_k eps_k a_k x_k ||_(p,q)^2, the second moment of the random
// sign sum.  Signs come from the bits of the pattern mask; accumulation is
// in fixed mask order.
inline double second_moment(std::span<const operator_matrix> xs,
                            std::span<const std::complex<double>> coeffs,
                            const lorentz_index& idx, const average_spec& spec) {
    if (xs.size() != coeffs.size())
        throw std::invalid_argument("second_moment: coefficient count mismatch");
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (!xs[0].same_algebra(xs[k]))
            throw algebra_mismatch("second_moment: family spans different algebras");
    double acc = 0.0;
    std::size_t count = 0;
    detail::for_each_pattern(xs.size(), spec, [&](std::uint64_t mask) {
        operator_matrix sum = operator_matrix::zero(xs[0].algebra());
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double sign = (mask >> k) & 1u ? -1.0 : 1.0;
            sum = sum + (sign * coeffs[k]) * xs[k];
        }
        const double norm = schatten_lorentz_norm(sum, idx);
        acc += norm * norm;
        ++count;
    });
    return acc / static_cast<double>(count);
}

// The square function ( sum_k |a_k|^2 x_k x_k* )^(1/2).
inline operator_matrix square_function(std::span<const operator_matrix> xs,
                                       std::span<const std::complex<double>> coeffs) {
    if (xs.empty()) throw std::invalid_argument("square_function: empty family");
    if (xs.size() != coeffs.size())
        throw std::invalid_argument("square_function: coefficient count mismatch");
    operator_matrix gram = operator_matrix::zero(xs[0].algebra());
    for (std::size_t k = 0; k < xs.size(); ++k)
        gram = gram + std::norm(coeffs[k]) * (xs[k] * xs[k].adjoint());
    return sqrt_psd(gram);
}

// Khintchine-type ratio: second moment of the sign sum over the squared
// norm of the square function.  A zero square function with a nonzero
// moment is a numerical fault and is reported as such.
inline double khintchine_ratio(std::span<const operator_matrix> xs,
                               std::span<const std::complex<double>> coeffs,
                               const lorentz_index& idx, const average_spec& spec) {
    const double moment = second_moment(xs, coeffs, idx, spec);
    const double sq = schatten_lorentz_norm(square_function(xs, coeffs), idx);
    const double denom = sq * sq;
    if (denom == 0.0) {
        if (moment <= 1e-24) return 0.0;  // everything vanished; ratio is vacuous
        throw numeric_degeneracy("khintchine_ratio: square function vanished under a "
                                 "nonzero second moment");
    }
    return moment / denom;
}

// Empirical cotype-2 ratio in the trace norm: sum_k |a_k|^2 ||x_k||_1^2 over
// the second moment at (1,1).
inline double cotype2_ratio(std::span<const operator_matrix> xs,
                            std::span<const std::complex<double>> coeffs,
                            const average_spec& spec) {
    if (xs.size() != coeffs.size())
        throw std::invalid_argument("cotype2_ratio: coefficient count mismatch");
    const lorentz_index trace_idx(1.0, 1.0);
    double num = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double n1 = schatten_lorentz_norm(xs[k], trace_idx);
        num += std::norm(coeffs[k]) * n1 * n1;
    }
    const double denom = second_moment(xs, coeffs, trace_idx, spec);
    if (denom == 0.0) {
        if (num <= 1e-24) return 0.0;
        throw numeric_degeneracy("cotype2_ratio: zero second moment under nonzero mass");
    }
    return num / denom;
}

}  // namespace nclorentz
