#pragma once

#include "randutv/matrix.hpp"

namespace randutv {

enum class Trans { N, T };

/// C <- alpha * op(A) * op(B) + beta * C, column-major, no aliasing between C
/// and A or B.
///
/// The accumulation order is part of the contract so that results are
/// bit-reproducible: C(i,j) is first scaled by beta (set to exactly 0 when
/// beta == 0, so stale NaN/Inf never leak through), then the k terms are added
/// in ascending k, each computed as op(A)(i,k) * fl(alpha * op(B)(k,j)).
/// There is exactly one implementation instance; it is compiled with FP
/// contraction disabled, so identical inputs give identical bits at any
/// optimization level.
void gemm(double alpha, Trans trans_a, ConstMatrixView a, Trans trans_b, ConstMatrixView b,
          double beta, MatrixView c);

/// sqrt of the sum of squares of all elements; 0 for empty views.
double frobenius_norm(ConstMatrixView a);

/// Largest singular value, estimated by power iteration on A*A from a fixed
/// seeded start vector.  Stops when the estimate's relative change drops below
/// tol or after max_iter iterations.  The estimate approaches sigma_1 from
/// below.
double spectral_norm_estimate(ConstMatrixView a, int max_iter = 100, double tol = 1e-10);

}  // namespace randutv
