#pragma once

#include <vector>

#include "randutv/matrix.hpp"

namespace randutv {

/// A = U diag(sigma) V', sigma sorted descending and non-negative.
struct SvdTriple {
    Matrix u;
    std::vector<double> sigma;
    Matrix v;
};

struct SvdOptions {
    /// A column pair is rotated while |b_p . b_q| exceeds
    /// max(tol, sqrt(n) eps) * ||b_p|| ||b_q||.  Scaling by the pair's own
    /// norms keeps the left factor orthogonal even when the block is badly
    /// conditioned, and the sqrt(n) eps floor sits at the rounding plateau of
    /// the inner products, so sweeps terminate.
    double tol = 1e-15;
    int max_sweeps = 30;
};

/// One-sided Jacobi SVD of a square block.  Full square U and V.  Throws
/// ConvergenceError (residual = max remaining |b_p . b_q| / ||b_p|| ||b_q||)
/// if the sweep cap is hit first.  Columns whose singular value sits at the
/// round-off floor (sigma <= 4 n eps ||A||_F) carry no reliable direction;
/// they are excluded from the rotation order and get deterministically
/// completed orthonormal U columns instead.
SvdTriple svd_block(ConstMatrixView a, SvdOptions opt = {});

/// Economic SVD of any dense matrix: U is m x p, V is n x p, p = min(m, n).
/// Square input goes straight to svd_block; rectangular input is reduced by a
/// QR of the tall side first, then the square factor is handled by svd_block.
SvdTriple svd_dense(ConstMatrixView a, SvdOptions opt = {});

/// SVD with full square U (m x m) and V (n x n), the short side padded by
/// deterministic orthonormal completion.  sigma has min(m, n) entries.
SvdTriple svd_full(ConstMatrixView a, SvdOptions opt = {});

/// Singular values only.
std::vector<double> singular_values(ConstMatrixView a, SvdOptions opt = {});

/// Extends a k x r matrix with orthonormal columns (r <= k) to a k x k
/// orthogonal matrix.  Candidates are taken from the identity in index order
/// (re-projected twice), with a fixed-seed random fallback, so the result is
/// deterministic.
Matrix complete_orthonormal(ConstMatrixView q);

}  // namespace randutv
