#pragma once

// Deterministic random builders shared by the test suite and the CLI
// scenarios.  Everything draws from a caller-supplied seeded_rng, so a seed
// fixes the full family; generators never touch global state.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "nclorentz/lorentz.hpp"
#include "nclorentz/operator_matrix.hpp"
#include "nclorentz/rng.hpp"
#include "nclorentz/step_function.hpp"

namespace nclorentz {

inline step_function random_step_function(seeded_rng& rng, std::size_t max_pieces = 6) {
    const std::size_t count = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_pieces)));
    std::vector<piece> pcs;
    pcs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        pcs.push_back({rng.uniform(0.05, 3.0), rng.uniform(0.05, 1.5)});
    return step_function(std::move(pcs));
}

inline simple_function random_simple_function(seeded_rng& rng, std::size_t atoms) {
    std::vector<atom> as;
    as.reserve(atoms);
    for (std::size_t i = 0; i < atoms; ++i)
        as.push_back({rng.uniform_complex(), rng.uniform(0.05, 1.5)});
    return simple_function(std::move(as));
}

inline std::vector<std::complex<double>> random_coefficients(seeded_rng& rng, std::size_t n) {
    std::vector<std::complex<double>> a;
    a.reserve(n);
    for (std::size_t i = 0; i < n; ++i) a.push_back(rng.uniform_complex());
    return a;
}

inline grid_family random_grid_family(seeded_rng& rng, std::size_t max_members = 5,
                                      std::size_t max_atoms = 6) {
    grid_family fam;
    const std::size_t atoms = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_atoms)));
    const std::size_t members = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_members)));
    fam.weights.reserve(atoms);
    for (std::size_t j = 0; j < atoms; ++j) fam.weights.push_back(rng.uniform(0.1, 1.5));
    fam.members.resize(members);
    for (std::vector<double>& m : fam.members) {
        m.reserve(atoms);
        for (std::size_t j = 0; j < atoms; ++j) m.push_back(rng.uniform(-2.0, 2.0));
    }
    return fam;
}

inline disjoint_family random_disjoint_family(seeded_rng& rng, std::size_t max_members = 5) {
    disjoint_family fam;
    const std::size_t members = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_members)));
    fam.members.reserve(members);
    for (std::size_t i = 0; i < members; ++i)
        fam.members.push_back(random_step_function(rng));
    return fam;
}

inline Eigen::MatrixXcd random_matrix(seeded_rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform_complex();
    return m;
}

inline Eigen::MatrixXcd random_unitary(seeded_rng& rng, Eigen::Index dim) {
    const Eigen::MatrixXcd m = random_matrix(rng, dim, dim);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

inline operator_matrix random_operator(seeded_rng& rng, const algebra_ptr& alg) {
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(alg->block_count());
    for (const algebra_block& b : alg->blocks()) blocks.push_back(random_matrix(rng, b.dim, b.dim));
    return operator_matrix(alg, std::move(blocks));
}

// A random permutation of {0, ..., n-1} via Fisher-Yates on the seeded
// stream (std::shuffle is implementation-defined, so it is avoided).
inline std::vector<std::size_t> random_permutation(seeded_rng& rng, std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

// A pairwise bi-disjoint family of n operators in a single block of
// dimension n * band_dim: member k carries a random dense band at row band
// rperm[k] and column band cperm[k], so both support families are mutually
// orthogonal by construction.
inline std::vector<operator_matrix> random_bidisjoint_family(seeded_rng& rng, std::size_t n,
                                                             Eigen::Index band_dim,
                                                             double trace_scale = 1.0) {
    const Eigen::Index dim = static_cast<Eigen::Index>(n) * band_dim;
    const algebra_ptr alg = make_matrix_algebra(dim, trace_scale);
    const std::vector<std::size_t> rperm = random_permutation(rng, n);
    const std::vector<std::size_t> cperm = random_permutation(rng, n);
    std::vector<operator_matrix> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
        m.block(static_cast<Eigen::Index>(rperm[k]) * band_dim,
                static_cast<Eigen::Index>(cperm[k]) * band_dim, band_dim, band_dim) =
            random_matrix(rng, band_dim, band_dim);
        out.push_back(operator_matrix(alg, {std::move(m)}));
    }
    return out;
}

// Gram-Schmidt in the trace-weighted Hilbert-Schmidt inner product
// tau(y* x); the result is an orthonormal family of n operators.
inline std::vector<operator_matrix> random_hs_orthogonal_family(seeded_rng& rng,
                                                                const algebra_ptr& alg,
                                                                std::size_t n) {
    auto inner = [](const operator_matrix& x, const operator_matrix& y) {
        return (y.adjoint() * x).trace();
    };
    std::vector<operator_matrix> out;
    out.reserve(n);
    while (out.size() < n) {
        operator_matrix cand = random_operator(rng, alg);
        for (const operator_matrix& prev : out)
            cand = cand - inner(cand, prev) * prev;
        const double norm = cand.hilbert_schmidt_norm();
        if (norm < 1e-8) continue;  // degenerate draw; try again
        out.push_back((1.0 / norm) * cand);
    }
    return out;
}

// A coefficiented operator family for Rademacher sweeps.  Roughly a quarter
// of the draws are structured bi-disjoint families -- the extremal case
// where sign sums are exactly sign-invariant -- and the rest are dense
// blocks; empirical constants estimated over the mixture include the tight
// configuration by construction instead of hoping to sample near it.
struct op_family {
    std::vector<operator_matrix> xs;
    std::vector<std::complex<double>> coeffs;
};

inline op_family random_op_family(seeded_rng& rng, std::size_t min_n, std::size_t max_n,
                                  Eigen::Index max_dim) {
    op_family fam;
    const std::size_t n =
        static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(min_n),
                                                 static_cast<std::int64_t>(max_n)));
    const bool structured = rng.uniform() < 0.25;
    if (structured) {
        const Eigen::Index band = rng.uniform_int(1, 2);
        fam.xs = random_bidisjoint_family(rng, n, band);
    } else {
        const Eigen::Index dim = rng.uniform_int(2, max_dim);
        const algebra_ptr alg = make_matrix_algebra(dim);
        fam.xs.reserve(n);
        for (std::size_t k = 0; k < n; ++k) fam.xs.push_back(random_operator(rng, alg));
    }
    fam.coeffs = random_coefficients(rng, n);
    return fam;
}

}  // namespace nclorentz
