// The only gemm instance in the library.  Compiled with -ffp-contract=off so
// the k-ascending accumulation documented in the header is the one the
// hardware performs; keep this a plain non-template function so there is a
// single code path for every caller.

#include "randutv/matrix_ops.hpp"

namespace randutv {

namespace {

inline void check_gemm_shapes(idx opa_r, idx opa_c, idx opb_r, idx opb_c, const MatrixView& c) {
    if (opa_c != opb_r || c.rows != opa_r || c.cols != opb_c)
        throw ShapeError("gemm shapes op(A)=" + std::to_string(opa_r) + "x" + std::to_string(opa_c) +
                         " op(B)=" + std::to_string(opb_r) + "x" + std::to_string(opb_c) +
                         " C=" + std::to_string(c.rows) + "x" + std::to_string(c.cols));
}

}  // namespace

void gemm(double alpha, Trans trans_a, ConstMatrixView a, Trans trans_b, ConstMatrixView b,
          double beta, MatrixView c) {
    const idx opa_r = trans_a == Trans::N ? a.rows : a.cols;
    const idx opa_c = trans_a == Trans::N ? a.cols : a.rows;
    const idx opb_r = trans_b == Trans::N ? b.rows : b.cols;
    const idx opb_c = trans_b == Trans::N ? b.cols : b.rows;
    check_gemm_shapes(opa_r, opa_c, opb_r, opb_c, c);

    const idx m = c.rows, n = c.cols, kk = opa_c;

    if (beta == 0.0) {
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i < m; ++i) c(i, j) = 0.0;
    } else if (beta != 1.0) {
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i < m; ++i) c(i, j) *= beta;
    }
    if (alpha == 0.0 || kk == 0) return;

    if (trans_a == Trans::N && trans_b == Trans::N) {
        for (idx j = 0; j < n; ++j)
            for (idx k = 0; k < kk; ++k) {
                const double t = alpha * b(k, j);
                const double* acol = a.data + k * a.ld;
                double* ccol = c.data + j * c.ld;
                for (idx i = 0; i < m; ++i) ccol[i] += acol[i] * t;
            }
    } else if (trans_a == Trans::N && trans_b == Trans::T) {
        for (idx j = 0; j < n; ++j)
            for (idx k = 0; k < kk; ++k) {
                const double t = alpha * b(j, k);
                const double* acol = a.data + k * a.ld;
                double* ccol = c.data + j * c.ld;
                for (idx i = 0; i < m; ++i) ccol[i] += acol[i] * t;
            }
    } else if (trans_a == Trans::T && trans_b == Trans::N) {
        // Dot-product form: columns of A and B are both contiguous here.
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i < m; ++i) {
                const double* acol = a.data + i * a.ld;
                const double* bcol = b.data + j * b.ld;
                double s = c(i, j);
                for (idx k = 0; k < kk; ++k) s += acol[k] * (alpha * bcol[k]);
                c(i, j) = s;
            }
    } else {
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i < m; ++i) {
                const double* acol = a.data + i * a.ld;
                double s = c(i, j);
                for (idx k = 0; k < kk; ++k) s += acol[k] * (alpha * b(j, k));
                c(i, j) = s;
            }
    }
}

}  // namespace randutv
