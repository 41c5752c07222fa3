#pragma once

// Finite tracial algebras and the operators living in them.
//
// A tracial_algebra is a finite direct sum of full matrix blocks; block b has
// dimension d_b and a strictly positive trace scale c_b, and the trace of an
// operator is sum_b c_b * tr(block_b).  This is rich enough to exercise every
// construction in the library (non-normalized traces, commutative algebras as
// all-ones dimension vectors, amplified algebras as single big blocks) while
// staying dense and exactly representable.
//
// All spectral work funnels through one primitive: the self-adjoint
// eigensolver applied to x*x (or x x*), which yields singular values and the
// matching frames.  Everything else -- singular value functions, absolute
// values, supports, spectral cuts -- is derived from that primitive, so the
// numerical behaviour is uniform across the library.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nclorentz/common.hpp"
#include "nclorentz/lorentz.hpp"
#include "nclorentz/step_function.hpp"

namespace nclorentz {

struct algebra_block {
    Eigen::Index dim = 1;
    double trace_scale = 1.0;

    friend bool operator==(const algebra_block&, const algebra_block&) = default;
};

class tracial_algebra {
public:
    explicit tracial_algebra(std::vector<algebra_block> blocks) : blocks_(std::move(blocks)) {
        if (blocks_.empty())
            throw std::invalid_argument("tracial_algebra: needs at least one block");
        for (const algebra_block& b : blocks_) {
            if (b.dim < 1)
                throw std::invalid_argument("tracial_algebra: block dimension must be >= 1");
            if (!(b.trace_scale > 0.0) || !std::isfinite(b.trace_scale))
                throw std::invalid_argument("tracial_algebra: trace scale must be in (0, inf)");
        }
    }

    const std::vector<algebra_block>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }
    const algebra_block& block(std::size_t i) const { return blocks_.at(i); }

    // tau(1) = sum_b c_b * d_b.
    double identity_trace() const {
        double acc = 0.0;
        for (const algebra_block& b : blocks_) acc += b.trace_scale * static_cast<double>(b.dim);
        return acc;
    }

    friend bool operator==(const tracial_algebra&, const tracial_algebra&) = default;

private:
    std::vector<algebra_block> blocks_;
};

using algebra_ptr = std::shared_ptr<const tracial_algebra>;

inline algebra_ptr make_algebra(std::vector<algebra_block> blocks) {
    return std::make_shared<const tracial_algebra>(std::move(blocks));
}

inline algebra_ptr make_matrix_algebra(Eigen::Index dim, double trace_scale = 1.0) {
    return make_algebra({{dim, trace_scale}});
}

class operator_matrix {
public:
    operator_matrix(algebra_ptr alg, std::vector<Eigen::MatrixXcd> blocks)
        : algebra_(std::move(alg)), blocks_(std::move(blocks)) {
        if (!algebra_) throw std::invalid_argument("operator_matrix: null algebra");
        if (blocks_.size() != algebra_->block_count())
            throw algebra_mismatch("operator_matrix: block count does not match algebra");
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const Eigen::Index d = algebra_->block(b).dim;
            if (blocks_[b].rows() != d || blocks_[b].cols() != d)
                throw algebra_mismatch("operator_matrix: block shape does not match algebra");
            if (!blocks_[b].allFinite())
                throw std::invalid_argument("operator_matrix: non-finite entries");
        }
    }

    static operator_matrix zero(const algebra_ptr& alg) {
        std::vector<Eigen::MatrixXcd> blocks;
        for (const algebra_block& b : alg->blocks())
            blocks.push_back(Eigen::MatrixXcd::Zero(b.dim, b.dim));
        return operator_matrix(alg, std::move(blocks));
    }

    static operator_matrix identity(const algebra_ptr& alg) {
        std::vector<Eigen::MatrixXcd> blocks;
        for (const algebra_block& b : alg->blocks())
            blocks.push_back(Eigen::MatrixXcd::Identity(b.dim, b.dim));
        return operator_matrix(alg, std::move(blocks));
    }

    const algebra_ptr& algebra() const { return algebra_; }
    const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
    const Eigen::MatrixXcd& block(std::size_t b) const { return blocks_.at(b); }

    bool same_algebra(const operator_matrix& other) const {
        return algebra_ == other.algebra_ || *algebra_ == *other.algebra_;
    }

    operator_matrix adjoint() const {
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(blocks_.size());
        for (const Eigen::MatrixXcd& m : blocks_) out.push_back(m.adjoint());
        return operator_matrix(algebra_, std::move(out));
    }

    std::complex<double> trace() const {
        std::complex<double> acc = 0.0;
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            acc += algebra_->block(b).trace_scale * blocks_[b].trace();
        return acc;
    }

    double trace_real() const { return trace().real(); }

    // Largest singular value across blocks.
    double operator_norm() const {
        double best = 0.0;
        for (const Eigen::MatrixXcd& m : blocks_) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.adjoint() * m,
                                                               Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success)
                throw numeric_degeneracy("operator_norm: eigensolver failed");
            const double top = es.eigenvalues().size() > 0
                                   ? es.eigenvalues()(es.eigenvalues().size() - 1)
                                   : 0.0;
            best = std::max(best, std::sqrt(std::max(0.0, top)));
        }
        return best;
    }

    // Trace-weighted Hilbert-Schmidt norm: sqrt(tau(x*x)).
    double hilbert_schmidt_norm() const {
        double acc = 0.0;
        for (std::size_t b = 0; b < blocks_.size(); ++b)
            acc += algebra_->block(b).trace_scale * blocks_[b].squaredNorm();
        return std::sqrt(acc);
    }

    bool is_hermitian(double tol = 1e-12) const {
        for (const Eigen::MatrixXcd& m : blocks_) {
            const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
            const double base = std::max(1.0, m.cwiseAbs().maxCoeff());
            if (dev > tol * base) return false;
        }
        return true;
    }

    friend operator_matrix operator+(const operator_matrix& x, const operator_matrix& y) {
        x.require_same_algebra(y, "operator+");
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(x.blocks_.size());
        for (std::size_t b = 0; b < x.blocks_.size(); ++b) out.push_back(x.blocks_[b] + y.blocks_[b]);
        return operator_matrix(x.algebra_, std::move(out));
    }

    friend operator_matrix operator-(const operator_matrix& x, const operator_matrix& y) {
        x.require_same_algebra(y, "operator-");
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(x.blocks_.size());
        for (std::size_t b = 0; b < x.blocks_.size(); ++b) out.push_back(x.blocks_[b] - y.blocks_[b]);
        return operator_matrix(x.algebra_, std::move(out));
    }

    friend operator_matrix operator-(const operator_matrix& x) {
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(x.blocks_.size());
        for (const Eigen::MatrixXcd& m : x.blocks_) out.push_back(-m);
        return operator_matrix(x.algebra_, std::move(out));
    }

    friend operator_matrix operator*(const operator_matrix& x, const operator_matrix& y) {
        x.require_same_algebra(y, "operator*");
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(x.blocks_.size());
        for (std::size_t b = 0; b < x.blocks_.size(); ++b) out.push_back(x.blocks_[b] * y.blocks_[b]);
        return operator_matrix(x.algebra_, std::move(out));
    }

    friend operator_matrix operator*(std::complex<double> c, const operator_matrix& x) {
        std::vector<Eigen::MatrixXcd> out;
        out.reserve(x.blocks_.size());
        for (const Eigen::MatrixXcd& m : x.blocks_) out.push_back(c * m);
        return operator_matrix(x.algebra_, std::move(out));
    }

    friend operator_matrix operator*(double c, const operator_matrix& x) {
        return std::complex<double>(c, 0.0) * x;
    }

private:
    void require_same_algebra(const operator_matrix& other, const char* who) const {
        if (!same_algebra(other))
            throw algebra_mismatch(std::string(who) + ": operands live in different algebras");
    }

    algebra_ptr algebra_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

namespace detail {

struct block_spectrum {
    std::vector<double> sv;   // ascending, aligned with frame columns
    Eigen::MatrixXcd frame;   // orthonormal eigenvectors of m* m
};

// Right singular data of one block, via an SVD of m itself.  Going through
// an eigendecomposition of m*m instead would square the condition number:
// rounding noise of size eps * sigma_max^2 in the product turns into
// spurious singular values of size sqrt(eps) * sigma_max, far above the
// rank floor, and genuine small singular values lose half their digits.
inline block_spectrum right_spectrum(const Eigen::MatrixXcd& m) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success)
        throw numeric_degeneracy("right_spectrum: SVD failed");
    const Eigen::Index n = m.cols();
    block_spectrum out;
    out.sv.resize(static_cast<std::size_t>(n));
    out.frame.resize(n, n);
    // JacobiSVD sorts descending; the block_spectrum contract is ascending.
    for (Eigen::Index i = 0; i < n; ++i) {
        out.sv[static_cast<std::size_t>(i)] = svd.singularValues()(n - 1 - i);
        out.frame.col(i) = svd.matrixV().col(n - 1 - i);
    }
    return out;
}

inline std::vector<block_spectrum> right_spectra(const operator_matrix& x) {
    std::vector<block_spectrum> out;
    out.reserve(x.blocks().size());
    for (const Eigen::MatrixXcd& m : x.blocks()) out.push_back(right_spectrum(m));
    return out;
}

inline double max_sv(const std::vector<block_spectrum>& spectra) {
    double best = 0.0;
    for (const block_spectrum& s : spectra)
        if (!s.sv.empty()) best = std::max(best, s.sv.back());
    return best;
}

}  // namespace detail

// Singular value function of x: each singular value of block b becomes a
// piece of width c_b (its trace weight).  Values within rank_tol of zero
// relative to the top singular value are numerical nulls and are dropped.
inline step_function mu_op(const operator_matrix& x, double rank_tol = rank_rel_tol) {
    const std::vector<detail::block_spectrum> spectra = detail::right_spectra(x);
    const double top = detail::max_sv(spectra);
    const double floor = rank_tol * top;
    std::vector<piece> pcs;
    for (std::size_t b = 0; b < spectra.size(); ++b) {
        const double w = x.algebra()->block(b).trace_scale;
        for (double s : spectra[b].sv)
            if (s > floor) pcs.push_back({s, w});
    }
    return step_function(std::move(pcs));
}

// |x| = (x*x)^(1/2), assembled from the right singular frame.
inline operator_matrix abs_op(const operator_matrix& x) {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(x.blocks().size());
    for (const Eigen::MatrixXcd& m : x.blocks()) {
        const detail::block_spectrum s = detail::right_spectrum(m);
        Eigen::VectorXd d(m.rows());
        for (Eigen::Index i = 0; i < m.rows(); ++i) d(i) = s.sv[static_cast<std::size_t>(i)];
        out.push_back(s.frame * d.asDiagonal() * s.frame.adjoint());
    }
    return operator_matrix(x.algebra(), std::move(out));
}

// Square root of a positive semidefinite operator.  Input must be Hermitian
// up to rounding; tiny negative eigenvalues are clamped to zero.
inline operator_matrix sqrt_psd(const operator_matrix& h) {
    if (!h.is_hermitian(1e-8))
        throw std::invalid_argument("sqrt_psd: operator is not Hermitian");
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(h.blocks().size());
    for (const Eigen::MatrixXcd& m : h.blocks()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            ((m + m.adjoint()) * 0.5).eval());
        if (es.info() != Eigen::Success)
            throw numeric_degeneracy("sqrt_psd: eigensolver failed");
        Eigen::VectorXd d(m.rows());
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            d(i) = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
        out.push_back(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
    }
    return operator_matrix(h.algebra(), std::move(out));
}

// An orthogonal projection.  The constructor verifies self-adjointness and
// idempotence in operator norm, so downstream code can rely on both.
class projection_op {
public:
    explicit projection_op(operator_matrix op, double tol = projection_tol)
        : op_(std::move(op)) {
        const operator_matrix sym_dev = op_ - op_.adjoint();
        if (sym_dev.operator_norm() > tol)
            throw std::invalid_argument("projection_op: not self-adjoint");
        const operator_matrix idem_dev = op_ * op_ - op_;
        if (idem_dev.operator_norm() > tol)
            throw std::invalid_argument("projection_op: not idempotent");
    }

    static projection_op identity(const algebra_ptr& alg) {
        return projection_op(operator_matrix::identity(alg));
    }

    static projection_op zero(const algebra_ptr& alg) {
        return projection_op(operator_matrix::zero(alg));
    }

    const operator_matrix& op() const { return op_; }

    double trace() const { return op_.trace_real(); }

    projection_op complement() const {
        return projection_op(operator_matrix::identity(op_.algebra()) - op_);
    }

private:
    operator_matrix op_;
};

// e <= f in projection order, i.e. f e = e up to tolerance.
inline bool is_subprojection(const projection_op& e, const projection_op& f,
                             double tol = projection_tol) {
    return (f.op() * e.op() - e.op()).operator_norm() <= tol;
}

struct support_pair {
    projection_op left;   // l(x): range projection of x
    projection_op right;  // r(x): range projection of x*
};

// Left and right support projections, both thresholded at rank_tol times
// the largest singular value of x.
inline support_pair supports(const operator_matrix& x, double rank_tol = rank_rel_tol) {
    const operator_matrix xa = x.adjoint();
    const std::vector<detail::block_spectrum> right_sp = detail::right_spectra(x);
    const std::vector<detail::block_spectrum> left_sp = detail::right_spectra(xa);
    const double floor = rank_tol * detail::max_sv(right_sp);

    auto assemble = [&](const std::vector<detail::block_spectrum>& spectra) {
        std::vector<Eigen::MatrixXcd> blocks;
        blocks.reserve(spectra.size());
        for (const detail::block_spectrum& s : spectra) {
            const Eigen::Index d = s.frame.rows();
            Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
                if (s.sv[static_cast<std::size_t>(i)] > floor)
                    p += s.frame.col(i) * s.frame.col(i).adjoint();
            blocks.push_back(std::move(p));
        }
        return projection_op(operator_matrix(x.algebra(), std::move(blocks)));
    };

    return {assemble(left_sp), assemble(right_sp)};
}

struct disjointness_flags {
    bool right_disjoint = false;  // r(x) r(y) = 0
    bool left_disjoint = false;   // l(x) l(y) = 0

    bool bidisjoint() const { return right_disjoint && left_disjoint; }
};

inline disjointness_flags disjointness(const operator_matrix& x, const operator_matrix& y) {
    const support_pair sx = supports(x);
    const support_pair sy = supports(y);
    disjointness_flags flags;
    flags.right_disjoint = (sx.right.op() * sy.right.op()).operator_norm() <= disjointness_tol;
    flags.left_disjoint = (sx.left.op() * sy.left.op()).operator_norm() <= disjointness_tol;
    return flags;
}

// S_(p,q) quasi-norm of x: the Lorentz norm of its singular value function.
inline double schatten_lorentz_norm(const operator_matrix& x, const lorentz_index& idx) {
    return lorentz_norm(mu_op(x), idx);
}

// Translation-invariant distance generating the measure topology.
inline double measure_distance(const operator_matrix& x, const operator_matrix& y) {
    return measure_distance(mu_op(x - y));
}

// Spectral cut: the projection chi_[eps * ||x||, inf)(|x|), with the norm
// taken in S_(p,q).  Requires x != 0 and eps in (0, 1).
inline projection_op spectral_cut(const operator_matrix& x, double eps,
                                  const lorentz_index& idx) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("spectral_cut: eps must be in (0, 1)");
    const double norm = schatten_lorentz_norm(x, idx);
    if (norm == 0.0)
        throw std::invalid_argument("spectral_cut: operator must be nonzero");
    const double threshold = eps * norm;
    const std::vector<detail::block_spectrum> spectra = detail::right_spectra(x);
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(spectra.size());
    for (const detail::block_spectrum& s : spectra) {
        const Eigen::Index d = s.frame.rows();
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            if (s.sv[static_cast<std::size_t>(i)] >= threshold)
                p += s.frame.col(i) * s.frame.col(i).adjoint();
        blocks.push_back(std::move(p));
    }
    return projection_op(operator_matrix(x.algebra(), std::move(blocks)));
}

// Membership test for the eps-slice of the compact-type set: the spectral
// cut must carry trace at least eps.  The tiny slack absorbs trace rounding.
inline bool kp_membership(const operator_matrix& x, double eps, const lorentz_index& idx) {
    return spectral_cut(x, eps, idx).trace() >= eps - 1e-12;
}

// For a decreasing chain e_1 >= e_2 >= ... of projections and a finite set K
// of operators, entry n is sup_{x in K} || e_n x e_n ||_(p,q).  A uniformly
// integrable K drives the profile to zero along any chain with traces
// tending to zero.
inline std::vector<double> uniform_integrability_profile(
    std::span<const operator_matrix> family, std::span<const projection_op> chain,
    const lorentz_index& idx) {
    if (family.empty())
        throw std::invalid_argument("uniform_integrability_profile: empty family");
    for (std::size_t n = 0; n + 1 < chain.size(); ++n)
        if (!is_subprojection(chain[n + 1], chain[n]))
            throw std::invalid_argument(
                "uniform_integrability_profile: chain is not decreasing");
    std::vector<double> profile;
    profile.reserve(chain.size());
    for (const projection_op& e : chain) {
        double worst = 0.0;
        for (const operator_matrix& x : family)
            worst = std::max(worst, schatten_lorentz_norm(e.op() * x * e.op(), idx));
        profile.push_back(worst);
    }
    return profile;
}

struct square_identity_result {
    operator_matrix lhs;   // |sum a_i x_i|^2
    operator_matrix rhs;   // |sum a_i |x_i||^2
    double deviation = 0.0;  // relative operator-norm gap between the two
};

// For a pairwise bi-disjoint family, |sum a_i x_i|^2 and |sum a_i |x_i||^2
// agree exactly: the cross terms x_i* x_j vanish through the right supports
// and |x_i|* |x_j| vanish the same way.  Families that are not pairwise
// bi-disjoint are rejected with the offending pair.
inline square_identity_result bidisjoint_square_identity(
    std::span<const operator_matrix> xs, std::span<const std::complex<double>> coeffs) {
    if (xs.empty()) throw std::invalid_argument("bidisjoint_square_identity: empty family");
    if (xs.size() != coeffs.size())
        throw std::invalid_argument("bidisjoint_square_identity: coefficient count mismatch");
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (!disjointness(xs[i], xs[j]).bidisjoint())
                throw disjointness_violation(
                    i, j, "bidisjoint_square_identity: members " + std::to_string(i) +
                              " and " + std::to_string(j) + " are not bi-disjoint");
    operator_matrix sum = operator_matrix::zero(xs[0].algebra());
    operator_matrix abs_sum = operator_matrix::zero(xs[0].algebra());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum = sum + coeffs[i] * xs[i];
        abs_sum = abs_sum + coeffs[i] * abs_op(xs[i]);
    }
    square_identity_result out{sum.adjoint() * sum, abs_sum.adjoint() * abs_sum, 0.0};
    const double scale =
        std::max({out.lhs.operator_norm(), out.rhs.operator_norm(), 1e-300});
    out.deviation = (out.lhs - out.rhs).operator_norm() / scale;
    return out;
}

}  // namespace nclorentz
