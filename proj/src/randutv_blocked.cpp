#include "randutv/randutv_blocked.hpp"

#include "randutv/jacobi_svd.hpp"
#include "randutv/matrix_ops.hpp"

namespace randutv {

namespace {

void check_config(const UTVConfig& cfg) {
    if (cfg.b < 1) throw ConfigError("block size must be >= 1, got " + std::to_string(cfg.b));
    if (cfg.q < 0) throw ConfigError("power iteration count must be >= 0, got " +
                                     std::to_string(cfg.q));
}

// B <- B * M through a temporary; M square.
void right_multiply(MatrixView b, ConstMatrixView m) {
    if (b.rows == 0 || b.cols == 0) return;
    Matrix tmp(b.rows, m.cols);
    gemm(1.0, Trans::N, b, Trans::N, m, 0.0, tmp.view());
    copy_into(b, tmp.view());
}

// B <- M' * B through a temporary.
void left_multiply_t(MatrixView b, ConstMatrixView m) {
    if (b.rows == 0 || b.cols == 0) return;
    Matrix tmp(m.cols, b.cols);
    gemm(1.0, Trans::T, m, Trans::N, b, 0.0, tmp.view());
    copy_into(b, tmp.view());
}

void write_rect_diag(MatrixView block, const std::vector<double>& sigma) {
    const idx p = static_cast<idx>(sigma.size());
    for (idx j = 0; j < block.cols; ++j)
        for (idx i = 0; i < block.rows; ++i)
            block(i, j) = (i == j && i < p) ? sigma[static_cast<std::size_t>(i)] : 0.0;
}

}  // namespace

StepTransform build_v_alpha(ConstMatrixView t22, idx b, int q, RngState& rng) {
    const idx rows22 = t22.rows, cols22 = t22.cols;
    Matrix g = generate_normal_random(rng, rows22, b);
    Matrix y(cols22, b);
    gemm(1.0, Trans::T, t22, Trans::N, g.view(), 0.0, y.view());
    Matrix z(rows22, b);
    for (int it = 0; it < q; ++it) {
        gemm(1.0, Trans::N, t22, Trans::N, y.view(), 0.0, z.view());
        gemm(1.0, Trans::T, t22, Trans::N, z.view(), 0.0, y.view());
    }
    StepTransform st;
    st.tau = hqr_inplace(y.view());
    st.twy = form_wy_t(y.view(), st.tau);
    st.qr = std::move(y);
    return st;
}

StepTransform build_u_alpha(MatrixView panel) {
    StepTransform st;
    st.tau = hqr_inplace(panel);
    st.twy = form_wy_t(panel, st.tau);
    st.qr = to_matrix(panel);
    return st;
}

BetaFactors beta_stage(MatrixView t22, idx bw) {
    const idx rows22 = t22.rows, cols22 = t22.cols;
    if (bw < 1 || bw > cols22)
        throw ShapeError("beta_stage: panel width " + std::to_string(bw) + " against " +
                         std::to_string(cols22) + " columns");
    const idx rt = rows22 < bw ? rows22 : bw;

    Matrix r(rt, bw);
    for (idx j = 0; j < bw; ++j)
        for (idx i = 0; i <= j && i < rt; ++i) r(i, j) = t22(i, j);
    SvdTriple s = svd_full(r.view());

    write_rect_diag(t22.block(0, 0, rows22, bw), s.sigma);
    if (cols22 > bw)
        left_multiply_t(t22.block(0, bw, rt, cols22 - bw), s.u.view());
    return BetaFactors{std::move(s.u), std::move(s.v)};
}

UTVResult randutv(ConstMatrixView a, const UTVConfig& cfg) {
    check_config(cfg);
    const idx m = a.rows, n = a.cols;

    if (cfg.qr_prepass && m > n) {
        HouseholderFactor f = hqr(a);
        Matrix r(n, n);
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i <= j; ++i) r(i, j) = f.qr(i, j);
        UTVConfig inner_cfg = cfg;
        inner_cfg.qr_prepass = false;
        UTVResult inner = randutv(r.view(), inner_cfg);

        UTVResult out;
        out.config = cfg;
        out.t = Matrix(m, n);
        for (idx j = 0; j < n; ++j)
            for (idx i = 0; i < n; ++i) out.t(i, j) = inner.t(i, j);
        if (cfg.build_u) {
            Matrix e = Matrix::identity(m, m);
            for (idx j = 0; j < n; ++j)
                for (idx i = 0; i < n; ++i) e(i, j) = inner.u(i, j);
            Matrix twy = form_wy_t(f.qr.view(), f.tau);
            apply_q_left(f.qr.view(), twy.view(), e.view());
            out.u = std::move(e);
        }
        if (cfg.build_v) out.v = std::move(inner.v);
        return out;
    }

    UTVResult out;
    out.config = cfg;
    out.t = to_matrix(a);
    if (cfg.build_u) out.u = Matrix::identity(m, m);
    if (cfg.build_v) out.v = Matrix::identity(n, n);
    Matrix& t = out.t;
    RngState rng(cfg.seed);

    for (idx i = 0;; ++i) {
        const idx r0 = i * cfg.b;
        const idx rows_rem = m - r0;
        const idx cols_rem = n - r0;
        if (rows_rem <= 0 || cols_rem <= 0) break;
        MatrixView t22 = t.view(r0, r0, rows_rem, cols_rem);

        if (cols_rem <= cfg.b) {
            // Trailing block narrower than a panel: finish with one dense SVD.
            SvdTriple s = svd_full(ConstMatrixView(t22));
            write_rect_diag(t22, s.sigma);
            if (r0 > 0) right_multiply(t.view(0, r0, r0, cols_rem), s.v.view());
            if (cfg.build_u) right_multiply(out.u.view(0, r0, m, rows_rem), s.u.view());
            if (cfg.build_v) right_multiply(out.v.view(0, r0, n, cols_rem), s.v.view());
            break;
        }

        StepTransform sv = build_v_alpha(ConstMatrixView(t22), cfg.b, cfg.q, rng);
        apply_q_right(sv.qr.view(), sv.twy.view(), t22);
        if (r0 > 0) apply_q_right(sv.qr.view(), sv.twy.view(), t.view(0, r0, r0, cols_rem));
        if (cfg.build_v)
            apply_q_right(sv.qr.view(), sv.twy.view(), out.v.view(0, r0, n, cols_rem));

        const idx bw = cfg.b;
        StepTransform su = build_u_alpha(t22.block(0, 0, rows_rem, bw));
        apply_qt_left(su.qr.view(), su.twy.view(), t22.block(0, bw, rows_rem, cols_rem - bw));
        if (cfg.build_u) apply_q_right(su.qr.view(), su.twy.view(), out.u.view(0, r0, m, rows_rem));

        BetaFactors bf = beta_stage(t22, bw);
        const idx rt = bf.u.rows();
        if (r0 > 0) right_multiply(t.view(0, r0, r0, bw), bf.v.view());
        if (cfg.build_u) right_multiply(out.u.view(0, r0, m, rt), bf.u.view());
        if (cfg.build_v) right_multiply(out.v.view(0, r0, n, bw), bf.v.view());
    }
    return out;
}

}  // namespace randutv
