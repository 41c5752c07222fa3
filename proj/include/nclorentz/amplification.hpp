#pragma once

// Amplification of a tracial algebra and the row-embedding constructions
// built on it.
//
// Amplifying M by m copies turns each block of dimension d into a block of
// dimension d*m, viewed as an m x m grid of d x d slots.  The trace scale of
// each block is kept, not renormalized: an element embedded in a diagonal
// slot has the same trace, the same singular value function and the same
// S_(p,q) norms as the original.  That choice is what makes the identities
// in this header exact rather than exact-up-to-dilation.
//
// Slots are indexed 1..m in both coordinates, matching the usual notation
// [y] for the element with y in slot (1, k) and zeros elsewhere.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nclorentz/common.hpp"
#include "nclorentz/lorentz.hpp"
#include "nclorentz/operator_matrix.hpp"

namespace nclorentz {

class amplified_algebra {
public:
    amplified_algebra(algebra_ptr base, std::size_t copies)
        : base_(std::move(base)), copies_(copies) {
        if (!base_) throw std::invalid_argument("amplified_algebra: null base");
        if (copies_ < 1) throw std::invalid_argument("amplified_algebra: copies must be >= 1");
        std::vector<algebra_block> blocks;
        blocks.reserve(base_->block_count());
        for (const algebra_block& b : base_->blocks())
            blocks.push_back({b.dim * static_cast<Eigen::Index>(copies_), b.trace_scale});
        realized_ = make_algebra(std::move(blocks));
    }

    const algebra_ptr& base() const { return base_; }
    const algebra_ptr& realized() const { return realized_; }
    std::size_t copies() const { return copies_; }

    // Element with y in slot (row_slot, col_slot) and zeros elsewhere.
    operator_matrix embed_at(const operator_matrix& y, std::size_t row_slot,
                             std::size_t col_slot) const {
        require_slot(row_slot, "embed_at");
        require_slot(col_slot, "embed_at");
        if (!(y.algebra() == base_ || *y.algebra() == *base_))
            throw algebra_mismatch("embed_at: element does not live in the base algebra");
        std::vector<Eigen::MatrixXcd> blocks;
        blocks.reserve(base_->block_count());
        for (std::size_t b = 0; b < base_->block_count(); ++b) {
            const Eigen::Index d = base_->block(b).dim;
            Eigen::MatrixXcd big =
                Eigen::MatrixXcd::Zero(d * static_cast<Eigen::Index>(copies_),
                                       d * static_cast<Eigen::Index>(copies_));
            big.block(static_cast<Eigen::Index>(row_slot - 1) * d,
                      static_cast<Eigen::Index>(col_slot - 1) * d, d, d) = y.block(b);
            blocks.push_back(std::move(big));
        }
        return operator_matrix(realized_, std::move(blocks));
    }

    // The d x d sub-block of an amplified element at one slot.
    operator_matrix extract_slot(const operator_matrix& a, std::size_t row_slot,
                                 std::size_t col_slot) const {
        require_slot(row_slot, "extract_slot");
        require_slot(col_slot, "extract_slot");
        if (!(a.algebra() == realized_ || *a.algebra() == *realized_))
            throw algebra_mismatch("extract_slot: element does not live in the amplification");
        std::vector<Eigen::MatrixXcd> blocks;
        blocks.reserve(base_->block_count());
        for (std::size_t b = 0; b < base_->block_count(); ++b) {
            const Eigen::Index d = base_->block(b).dim;
            blocks.push_back(a.block(b).block(static_cast<Eigen::Index>(row_slot - 1) * d,
                                              static_cast<Eigen::Index>(col_slot - 1) * d, d,
                                              d));
        }
        return operator_matrix(base_, std::move(blocks));
    }

    // pi_k: identity of the k-th diagonal slot; trace equals tau(1) of base.
    projection_op slot_projection(std::size_t k) const {
        return projection_op(embed_at(operator_matrix::identity(base_), k, k));
    }

private:
    void require_slot(std::size_t k, const char* who) const {
        if (k < 1 || k > copies_)
            throw std::invalid_argument(std::string(who) + ": slot index out of range");
    }

    algebra_ptr base_;
    algebra_ptr realized_;
    std::size_t copies_;
};

inline amplified_algebra amplify(const algebra_ptr& base, std::size_t copies) {
    return amplified_algebra(base, copies);
}

// [y] with y in slot (1, k) of the first row.
inline operator_matrix row_embed(const amplified_algebra& amp, const operator_matrix& y,
                                 std::size_t k) {
    return amp.embed_at(y, 1, k);
}

// Convenience form that builds the m-fold amplification on the fly.
inline operator_matrix row_embed(const operator_matrix& y, std::size_t k, std::size_t m) {
    return row_embed(amplified_algebra(y.algebra(), m), y, k);
}

struct row_norm_result {
    double row_norm = 0.0;              // || sum_k a_k [y_k] ||_(p,q)
    double square_function_norm = 0.0;  // || ( sum_k |a_k|^2 y_k y_k* )^(1/2) ||_(p,q)
    double deviation = 0.0;             // relative gap
};

// The row norm identity: a coefficient sum of first-row embeddings has the
// same singular value function as the square function of the family, because
// R R* is the square function sitting in the (1,1) corner.  Exact for every
// Lorentz index.
inline row_norm_result row_norm_identity(std::span<const operator_matrix> ys,
                                         std::span<const std::complex<double>> coeffs,
                                         const lorentz_index& idx) {
    if (ys.empty()) throw std::invalid_argument("row_norm_identity: empty family");
    if (ys.size() != coeffs.size())
        throw std::invalid_argument("row_norm_identity: coefficient count mismatch");
    for (std::size_t k = 1; k < ys.size(); ++k)
        if (!ys[0].same_algebra(ys[k]))
            throw algebra_mismatch("row_norm_identity: family spans different algebras");

    const amplified_algebra amp(ys[0].algebra(), ys.size());
    operator_matrix row = operator_matrix::zero(amp.realized());
    operator_matrix gram = operator_matrix::zero(ys[0].algebra());
    for (std::size_t k = 0; k < ys.size(); ++k) {
        row = row + coeffs[k] * row_embed(amp, ys[k], k + 1);
        gram = gram + std::norm(coeffs[k]) * (ys[k] * ys[k].adjoint());
    }
    row_norm_result out;
    out.row_norm = schatten_lorentz_norm(row, idx);
    out.square_function_norm = schatten_lorentz_norm(sqrt_psd(gram), idx);
    out.deviation = std::abs(out.row_norm - out.square_function_norm) /
                    std::max(out.square_function_norm, 1e-300);
    return out;
}

struct corner_identity_result {
    double row_side = 0.0;     // || ( sum_k a_(1k) a_(1k)* )^(1/2) ||_(p,p)
    double corner_side = 0.0;  // || e |a*|^2 e ||_(p/2,p/2) ^ (1/2)
    double deviation = 0.0;
};

// First-row square function of an amplified element a versus the compressed
// square |a*|^2 = a a* in the (1,1) corner: equal exactly, since the corner
// compression e (a a*) e is the matrix sum_k a_(1k) a_(1k)* in slot (1,1).
inline corner_identity_result corner_square_identity(const amplified_algebra& amp,
                                                     const operator_matrix& a, double p) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("corner_square_identity: p must be in (0, inf)");
    operator_matrix row_gram = operator_matrix::zero(amp.base());
    for (std::size_t k = 1; k <= amp.copies(); ++k) {
        const operator_matrix slot = amp.extract_slot(a, 1, k);
        row_gram = row_gram + slot * slot.adjoint();
    }
    const projection_op corner = amp.slot_projection(1);
    const operator_matrix compressed = corner.op() * (a * a.adjoint()) * corner.op();

    corner_identity_result out;
    out.row_side = schatten_lorentz_norm(sqrt_psd(row_gram), lorentz_index(p, p));
    out.corner_side =
        std::sqrt(schatten_lorentz_norm(compressed, lorentz_index(p / 2.0, p / 2.0)));
    out.deviation =
        std::abs(out.row_side - out.corner_side) / std::max(out.corner_side, 1e-300);
    return out;
}

// Disjointification: send x_1, ..., x_n to s_k = [z_k*]* where z_k = [x_k]
// places x_k in slot (1, k) of the first amplification.  The second row
// embedding (of the adjoints) followed by an adjoint moves the k-th element
// into row band k and column band k of the double amplification, so the s_k
// are pairwise bi-disjoint while each keeps the singular value function of
// its x_k.  All results live in one shared double amplification.
inline std::vector<operator_matrix> disjointify(std::span<const operator_matrix> xs) {
    if (xs.empty()) throw std::invalid_argument("disjointify: empty family");
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (!xs[0].same_algebra(xs[k]))
            throw algebra_mismatch("disjointify: family spans different algebras");
    const std::size_t n = xs.size();
    const amplified_algebra inner(xs[0].algebra(), n);
    const amplified_algebra outer(inner.realized(), n);
    std::vector<operator_matrix> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const operator_matrix z = row_embed(inner, xs[k], k + 1);
        out.push_back(row_embed(outer, z.adjoint(), k + 1).adjoint());
    }
    return out;
}

}  // namespace nclorentz
