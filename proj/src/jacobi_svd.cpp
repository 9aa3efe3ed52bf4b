#include "randutv/jacobi_svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "randutv/errors.hpp"
#include "randutv/householder.hpp"
#include "randutv/matrix_ops.hpp"
#include "randutv/rng.hpp"

namespace randutv {

namespace {

// Orthogonality defect of columns p and q of b, and their squared norms.
struct PairState {
    double alpha;
    double beta;
    double gamma;
};

PairState pair_state(const Matrix& b, idx p, idx q) {
    PairState s{0.0, 0.0, 0.0};
    const idx n = b.rows();
    const double* cp = b.data() + p * n;
    const double* cq = b.data() + q * n;
    for (idx i = 0; i < n; ++i) {
        s.alpha += cp[i] * cp[i];
        s.beta += cq[i] * cq[i];
        s.gamma += cp[i] * cq[i];
    }
    return s;
}

}  // namespace

SvdTriple svd_block(ConstMatrixView a, SvdOptions opt) {
    if (a.rows != a.cols)
        throw ShapeError("svd_block expects a square block, got " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols));
    const idx n = a.rows;
    Matrix b = to_matrix(a);
    Matrix v = Matrix::identity(n, n);

    const double nf = frobenius_norm(a);
    if (n == 0 || nf == 0.0) {
        SvdTriple out;
        out.u = Matrix::identity(n, n);
        out.sigma.assign(static_cast<std::size_t>(n), 0.0);
        out.v = std::move(v);
        return out;
    }
    const double eps = std::numeric_limits<double>::epsilon();
    // Pair threshold is relative to the two column norms: an absolute cutoff
    // would leave small-norm pairs unorthogonalized and the left factor loses
    // orthogonality by the square of the block's condition number.  Columns
    // at the round-off floor carry no signal and are left out of the rotation
    // order entirely; the output stage completes their U columns.
    const double rel = std::max(opt.tol, std::sqrt(static_cast<double>(n)) * eps);
    const double floor_col = 4.0 * static_cast<double>(n) * eps * nf;

    bool converged = false;
    for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
        bool rotated = false;
        for (idx p = 0; p < n - 1; ++p) {
            for (idx q = p + 1; q < n; ++q) {
                PairState s = pair_state(b, p, q);
                const double np = std::sqrt(s.alpha), nq = std::sqrt(s.beta);
                if (np <= floor_col || nq <= floor_col) continue;
                if (std::abs(s.gamma) <= rel * np * nq) continue;
                rotated = true;
                const double zeta = (s.beta - s.alpha) / (2.0 * s.gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                double* bp = b.data() + p * n;
                double* bq = b.data() + q * n;
                double* vp = v.data() + p * n;
                double* vq = v.data() + q * n;
                for (idx i = 0; i < n; ++i) {
                    const double x = bp[i], y = bq[i];
                    bp[i] = c * x - sn * y;
                    bq[i] = sn * x + c * y;
                }
                for (idx i = 0; i < n; ++i) {
                    const double x = vp[i], y = vq[i];
                    vp[i] = c * x - sn * y;
                    vq[i] = sn * x + c * y;
                }
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        double worst = 0.0;
        for (idx p = 0; p < n - 1; ++p)
            for (idx q = p + 1; q < n; ++q) {
                PairState s = pair_state(b, p, q);
                const double np = std::sqrt(s.alpha), nq = std::sqrt(s.beta);
                if (np <= floor_col || nq <= floor_col) continue;
                worst = std::max(worst, std::abs(s.gamma) / (np * nq));
            }
        throw ConvergenceError("jacobi sweeps exhausted after " +
                                   std::to_string(opt.max_sweeps) + " sweeps",
                               worst);
    }

    std::vector<double> sig(static_cast<std::size_t>(n));
    for (idx j = 0; j < n; ++j) {
        double s = 0.0;
        const double* cj = b.data() + j * n;
        for (idx i = 0; i < n; ++i) s += cj[i] * cj[i];
        sig[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
    std::vector<idx> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), idx{0});
    std::stable_sort(perm.begin(), perm.end(), [&](idx x, idx y) {
        return sig[static_cast<std::size_t>(x)] > sig[static_cast<std::size_t>(y)];
    });

    SvdTriple out;
    out.u = Matrix(n, n);
    out.v = Matrix(n, n);
    out.sigma.resize(static_cast<std::size_t>(n));
    // Columns at the round-off floor were excluded from the rotation order
    // and carry no directional information, so their U columns are completed
    // instead of normalized.
    idx kept = 0;
    for (idx t = 0; t < n; ++t) {
        const idx j = perm[static_cast<std::size_t>(t)];
        const double s = sig[static_cast<std::size_t>(j)];
        out.sigma[static_cast<std::size_t>(t)] = s;
        for (idx i = 0; i < n; ++i) out.v(i, t) = v(i, j);
        if (s > floor_col) {
            for (idx i = 0; i < n; ++i) out.u(i, t) = b(i, j) / s;
            kept = t + 1;
        }
    }
    if (kept < n) {
        Matrix filled = complete_orthonormal(out.u.view(0, 0, n, kept));
        for (idx t = kept; t < n; ++t)
            for (idx i = 0; i < n; ++i) out.u(i, t) = filled(i, t);
    }
    return out;
}

SvdTriple svd_dense(ConstMatrixView a, SvdOptions opt) {
    const idx m = a.rows, n = a.cols;
    if (m == n) return svd_block(a, opt);
    if (m > n) {
        HouseholderFactor f = hqr(a);
        Matrix r(n, n);
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i <= j; ++i) r(i, j) = f.qr(i, j);
        SvdTriple inner = svd_block(r.view(), opt);
        Matrix qe = form_q(f, n);
        SvdTriple out;
        out.u = Matrix(m, n);
        gemm(1.0, Trans::N, qe.view(), Trans::N, inner.u.view(), 0.0, out.u.view());
        out.sigma = std::move(inner.sigma);
        out.v = std::move(inner.v);
        return out;
    }
    // Wide: factor A' = Q R, so A = R' Q' and the square SVD runs on R'.
    Matrix at(n, m);
    for (idx j = 0; j < n; ++j)
        for (idx i = 0; i < m; ++i) at(j, i) = a(i, j);
    HouseholderFactor f = hqr(at.view());
    Matrix rt(m, m);
    for (idx j = 0; j < m; ++j)
        for (idx i = 0; i <= j; ++i) rt(j, i) = f.qr(i, j);
    SvdTriple inner = svd_block(rt.view(), opt);
    Matrix qe = form_q(f, m);
    SvdTriple out;
    out.u = std::move(inner.u);
    out.sigma = std::move(inner.sigma);
    out.v = Matrix(n, m);
    gemm(1.0, Trans::N, qe.view(), Trans::N, inner.v.view(), 0.0, out.v.view());
    return out;
}

SvdTriple svd_full(ConstMatrixView a, SvdOptions opt) {
    SvdTriple e = svd_dense(a, opt);
    if (a.rows > a.cols)
        e.u = complete_orthonormal(e.u.view());
    else if (a.rows < a.cols)
        e.v = complete_orthonormal(e.v.view());
    return e;
}

std::vector<double> singular_values(ConstMatrixView a, SvdOptions opt) {
    return svd_dense(a, opt).sigma;
}

Matrix complete_orthonormal(ConstMatrixView q) {
    const idx k = q.rows, r = q.cols;
    if (r > k)
        throw ShapeError("complete_orthonormal: " + std::to_string(r) + " columns exceed " +
                         std::to_string(k) + " rows");
    Matrix out(k, k);
    for (idx j = 0; j < r; ++j)
        for (idx i = 0; i < k; ++i) out(i, j) = q(i, j);
    idx have = r;

    auto try_candidate = [&](const std::vector<double>& cand, double accept) -> bool {
        std::vector<double> u = cand;
        for (int pass = 0; pass < 2; ++pass) {
            for (idx j = 0; j < have; ++j) {
                double dot = 0.0;
                for (idx i = 0; i < k; ++i) dot += out(i, j) * u[static_cast<std::size_t>(i)];
                for (idx i = 0; i < k; ++i) u[static_cast<std::size_t>(i)] -= dot * out(i, j);
            }
        }
        double nrm = 0.0;
        for (idx i = 0; i < k; ++i) nrm += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        nrm = std::sqrt(nrm);
        if (nrm <= accept) return false;
        for (idx i = 0; i < k; ++i) out(i, have) = u[static_cast<std::size_t>(i)] / nrm;
        ++have;
        return true;
    };

    std::vector<double> cand(static_cast<std::size_t>(k), 0.0);
    for (idx c = 0; c < k && have < k; ++c) {
        cand.assign(static_cast<std::size_t>(k), 0.0);
        cand[static_cast<std::size_t>(c)] = 1.0;
        try_candidate(cand, 0.25);
    }
    // Rare fallback: identity candidates too aligned with the existing range.
    RngState rng(0xC0317E7Eu);
    for (int guard = 0; have < k && guard < 1000; ++guard) {
        for (idx i = 0; i < k; ++i) cand[static_cast<std::size_t>(i)] = rng.next_normal();
        try_candidate(cand, 1e-6);
    }
    if (have < k) throw Error("orthonormal completion failed");
    return out;
}

}  // namespace randutv
