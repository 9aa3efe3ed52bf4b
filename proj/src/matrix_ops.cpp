#include "randutv/matrix_ops.hpp"

#include <cmath>

#include "randutv/rng.hpp"

namespace randutv {

double frobenius_norm(ConstMatrixView a) {
    double s = 0.0;
    for (idx j = 0; j < a.cols; ++j)
        for (idx i = 0; i < a.rows; ++i) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double spectral_norm_estimate(ConstMatrixView a, int max_iter, double tol) {
    if (a.rows == 0 || a.cols == 0) return 0.0;

    // Fixed internal stream keeps repeated estimates of the same matrix equal.
    RngState rng(0x5EEDB0B5u);
    Matrix x = generate_normal_random(rng, a.cols, 1);
    Matrix y(a.rows, 1);

    double nx = frobenius_norm(x.view());
    if (nx == 0.0) return 0.0;
    for (idx i = 0; i < a.cols; ++i) x(i, 0) /= nx;

    double est = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        gemm(1.0, Trans::N, a, Trans::N, x.view(), 0.0, y.view());
        gemm(1.0, Trans::T, a, Trans::N, y.view(), 0.0, x.view());
        const double ny = frobenius_norm(x.view());
        if (ny == 0.0) return 0.0;  // start vector fell in the null space closure
        const double next = std::sqrt(ny);
        for (idx i = 0; i < a.cols; ++i) x(i, 0) /= ny;
        if (it > 0 && std::abs(next - est) <= tol * next) return next;
        est = next;
    }
    return est;
}

}  // namespace randutv
