#include "randutv/householder.hpp"

#include <cmath>

#include "randutv/matrix_ops.hpp"

namespace randutv {

namespace {

// Householder vector for x = [alpha; tail], tail of length len, normalized to
// a unit head: on return tail holds v(1:), and (beta, tau) describe
// H x = beta e_1 with beta >= 0.  The head offset alpha - beta is formed as
// -sigma / (alpha + beta) when alpha >= 0 to dodge cancellation.
struct HouseStep {
    double beta;
    double tau;
};

HouseStep house(double alpha, double* tail, idx len, idx stride) {
    double sigma = 0.0;
    for (idx i = 0; i < len; ++i) {
        const double t = tail[i * stride];
        sigma += t * t;
    }
    if (sigma == 0.0) {
        if (alpha >= 0.0) return {alpha, 0.0};
        return {-alpha, 2.0};  // v = e_1, pure sign flip
    }
    const double beta = std::sqrt(alpha * alpha + sigma);
    const double head = alpha >= 0.0 ? -sigma / (alpha + beta) : alpha - beta;
    for (idx i = 0; i < len; ++i) tail[i * stride] /= head;
    return {beta, -head / beta};
}

// Dense unit-lower-trapezoidal W (m x p) extracted from packed reflectors.
Matrix make_w(ConstMatrixView qr, idx p) {
    Matrix w(qr.rows, p);
    for (idx j = 0; j < p; ++j) {
        w(j, j) = 1.0;
        for (idx i = j + 1; i < qr.rows; ++i) w(i, j) = qr(i, j);
    }
    return w;
}

}  // namespace

std::vector<double> hqr_inplace(MatrixView a) {
    const idx m = a.rows, n = a.cols;
    const idx p = m < n ? m : n;
    std::vector<double> tau(static_cast<std::size_t>(p));
    for (idx j = 0; j < p; ++j) {
        const idx len = m - j - 1;
        HouseStep h = house(a(j, j), len > 0 ? &a(j + 1, j) : nullptr, len, 1);
        a(j, j) = h.beta;
        tau[static_cast<std::size_t>(j)] = h.tau;
        if (h.tau == 0.0) continue;
        for (idx jj = j + 1; jj < n; ++jj) {
            double w = a(j, jj);
            for (idx i = j + 1; i < m; ++i) w += a(i, j) * a(i, jj);
            w *= h.tau;
            a(j, jj) -= w;
            for (idx i = j + 1; i < m; ++i) a(i, jj) -= w * a(i, j);
        }
    }
    return tau;
}

HouseholderFactor hqr(ConstMatrixView a) {
    HouseholderFactor f;
    f.qr = to_matrix(a);
    f.tau = hqr_inplace(f.qr.view());
    return f;
}

Matrix form_wy_t(ConstMatrixView qr, const std::vector<double>& tau) {
    const idx m = qr.rows;
    const idx p = static_cast<idx>(tau.size());
    Matrix t(p, p);
    std::vector<double> z(static_cast<std::size_t>(p));
    for (idx j = 0; j < p; ++j) {
        const double tj = tau[static_cast<std::size_t>(j)];
        // z = W(:, 0:j)' v_j; v_j is zero above row j with a unit head there.
        for (idx k = 0; k < j; ++k) {
            double s = qr(j, k);
            for (idx i = j + 1; i < m; ++i) s += qr(i, k) * qr(i, j);
            z[static_cast<std::size_t>(k)] = s;
        }
        for (idx k = 0; k < j; ++k) {
            double s = 0.0;
            for (idx l = k; l < j; ++l) s += t(k, l) * z[static_cast<std::size_t>(l)];
            t(k, j) = -tj * s;
        }
        t(j, j) = tj;
    }
    return t;
}

CompactWY form_compact_wy(const HouseholderFactor& f) {
    return CompactWY{f.qr, form_wy_t(f.qr.view(), f.tau)};
}

void apply_qt_left(ConstMatrixView qr, ConstMatrixView twy, MatrixView b) {
    const idx p = twy.rows;
    if (p == 0 || b.cols == 0) return;
    if (qr.rows != b.rows)
        throw ShapeError("apply_qt_left: factor has " + std::to_string(qr.rows) +
                         " rows, target " + std::to_string(b.rows));
    Matrix w = make_w(qr, p);
    Matrix z(p, b.cols), z2(p, b.cols);
    gemm(1.0, Trans::T, w.view(), Trans::N, b, 0.0, z.view());
    gemm(1.0, Trans::T, twy, Trans::N, z.view(), 0.0, z2.view());
    gemm(-1.0, Trans::N, w.view(), Trans::N, z2.view(), 1.0, b);
}

void apply_q_left(ConstMatrixView qr, ConstMatrixView twy, MatrixView b) {
    const idx p = twy.rows;
    if (p == 0 || b.cols == 0) return;
    if (qr.rows != b.rows)
        throw ShapeError("apply_q_left: factor has " + std::to_string(qr.rows) +
                         " rows, target " + std::to_string(b.rows));
    Matrix w = make_w(qr, p);
    Matrix z(p, b.cols), z2(p, b.cols);
    gemm(1.0, Trans::T, w.view(), Trans::N, b, 0.0, z.view());
    gemm(1.0, Trans::N, twy, Trans::N, z.view(), 0.0, z2.view());
    gemm(-1.0, Trans::N, w.view(), Trans::N, z2.view(), 1.0, b);
}

void apply_q_right(ConstMatrixView qr, ConstMatrixView twy, MatrixView b) {
    const idx p = twy.rows;
    if (p == 0 || b.rows == 0) return;
    if (qr.rows != b.cols)
        throw ShapeError("apply_q_right: factor has " + std::to_string(qr.rows) +
                         " rows, target has " + std::to_string(b.cols) + " cols");
    Matrix w = make_w(qr, p);
    Matrix z(b.rows, p), z2(b.rows, p);
    gemm(1.0, Trans::N, b, Trans::N, w.view(), 0.0, z.view());
    gemm(1.0, Trans::N, z.view(), Trans::N, twy, 0.0, z2.view());
    gemm(-1.0, Trans::N, z2.view(), Trans::T, w.view(), 1.0, b);
}

void apply_qt_right(ConstMatrixView qr, ConstMatrixView twy, MatrixView b) {
    const idx p = twy.rows;
    if (p == 0 || b.rows == 0) return;
    if (qr.rows != b.cols)
        throw ShapeError("apply_qt_right: factor has " + std::to_string(qr.rows) +
                         " rows, target has " + std::to_string(b.cols) + " cols");
    Matrix w = make_w(qr, p);
    Matrix z(b.rows, p), z2(b.rows, p);
    gemm(1.0, Trans::N, b, Trans::N, w.view(), 0.0, z.view());
    gemm(1.0, Trans::N, z.view(), Trans::T, twy, 0.0, z2.view());
    gemm(-1.0, Trans::N, z2.view(), Trans::T, w.view(), 1.0, b);
}

Matrix form_q(const HouseholderFactor& f, idx ncols) {
    const idx m = f.rows();
    if (ncols < 0 || ncols > m)
        throw ShapeError("form_q: " + std::to_string(ncols) + " columns from a " +
                         std::to_string(m) + "-row factor");
    Matrix x = Matrix::identity(m, ncols);
    for (idx j = f.nreflectors() - 1; j >= 0; --j) {
        const double tj = f.tau[static_cast<std::size_t>(j)];
        if (tj == 0.0) continue;
        for (idx c = 0; c < ncols; ++c) {
            double w = x(j, c);
            for (idx i = j + 1; i < m; ++i) w += f.qr(i, j) * x(i, c);
            w *= tj;
            x(j, c) -= w;
            for (idx i = j + 1; i < m; ++i) x(i, c) -= w * f.qr(i, j);
        }
    }
    return x;
}

std::vector<double> comp_td_qr_inplace(MatrixView r, MatrixView d) {
    const idx b = r.cols;
    if (r.rows != b)
        throw ShapeError("comp_td_qr: R must be square, got " + std::to_string(r.rows) + "x" +
                         std::to_string(b));
    if (d.cols != b)
        throw ShapeError("comp_td_qr: D has " + std::to_string(d.cols) + " cols, R has " +
                         std::to_string(b));
    const idx l = d.rows;
    std::vector<double> tau(static_cast<std::size_t>(b));
    for (idx j = 0; j < b; ++j) {
        HouseStep h = house(r(j, j), l > 0 ? &d(0, j) : nullptr, l, 1);
        r(j, j) = h.beta;
        tau[static_cast<std::size_t>(j)] = h.tau;
        if (h.tau == 0.0) continue;
        for (idx jj = j + 1; jj < b; ++jj) {
            double w = r(j, jj);
            for (idx i = 0; i < l; ++i) w += d(i, j) * d(i, jj);
            w *= h.tau;
            r(j, jj) -= w;
            for (idx i = 0; i < l; ++i) d(i, jj) -= w * d(i, j);
        }
    }
    return tau;
}

Matrix form_td_wy_t(ConstMatrixView d, const std::vector<double>& tau) {
    const idx b = static_cast<idx>(tau.size());
    const idx l = d.rows;
    Matrix t(b, b);
    std::vector<double> z(static_cast<std::size_t>(b));
    for (idx j = 0; j < b; ++j) {
        const double tj = tau[static_cast<std::size_t>(j)];
        for (idx k = 0; k < j; ++k) {
            double s = 0.0;
            for (idx i = 0; i < l; ++i) s += d(i, k) * d(i, j);
            z[static_cast<std::size_t>(k)] = s;
        }
        for (idx k = 0; k < j; ++k) {
            double s = 0.0;
            for (idx ll = k; ll < j; ++ll) s += t(k, ll) * z[static_cast<std::size_t>(ll)];
            t(k, j) = -tj * s;
        }
        t(j, j) = tj;
    }
    return t;
}

TdQRFactor comp_td_qr(ConstMatrixView r, ConstMatrixView d) {
    TdQRFactor f;
    f.r = to_matrix(r);
    f.d = to_matrix(d);
    f.tau = comp_td_qr_inplace(f.r.view(), f.d.view());
    f.twy = form_td_wy_t(f.d.view(), f.tau);
    return f;
}

void apply_qt_left_td(ConstMatrixView d, ConstMatrixView twy, MatrixView b_top, MatrixView b_bot) {
    const idx b = twy.rows;
    if (b_top.rows != b || b_bot.rows != d.rows || b_top.cols != b_bot.cols)
        throw ShapeError("apply_qt_left_td: target shapes " + std::to_string(b_top.rows) + "x" +
                         std::to_string(b_top.cols) + " / " + std::to_string(b_bot.rows) + "x" +
                         std::to_string(b_bot.cols) + " against b=" + std::to_string(b) +
                         ", l=" + std::to_string(d.rows));
    if (b_top.cols == 0) return;
    Matrix z0(b, b_top.cols), z(b, b_top.cols);
    copy_into(z0.view(), b_top);
    gemm(1.0, Trans::T, d, Trans::N, b_bot, 1.0, z0.view());
    gemm(1.0, Trans::T, twy, Trans::N, z0.view(), 0.0, z.view());
    for (idx j = 0; j < b_top.cols; ++j)
        for (idx i = 0; i < b; ++i) b_top(i, j) -= z(i, j);
    gemm(-1.0, Trans::N, d, Trans::N, z.view(), 1.0, b_bot);
}

void apply_q_right_td(ConstMatrixView d, ConstMatrixView twy, MatrixView c_left,
                      MatrixView c_right) {
    const idx b = twy.rows;
    if (c_left.cols != b || c_right.cols != d.rows || c_left.rows != c_right.rows)
        throw ShapeError("apply_q_right_td: target shapes " + std::to_string(c_left.rows) + "x" +
                         std::to_string(c_left.cols) + " / " + std::to_string(c_right.rows) + "x" +
                         std::to_string(c_right.cols) + " against b=" + std::to_string(b) +
                         ", l=" + std::to_string(d.rows));
    if (c_left.rows == 0) return;
    Matrix z0(c_left.rows, b), z(c_left.rows, b);
    copy_into(z0.view(), c_left);
    gemm(1.0, Trans::N, c_right, Trans::N, d, 1.0, z0.view());
    gemm(1.0, Trans::N, z0.view(), Trans::N, twy, 0.0, z.view());
    for (idx j = 0; j < b; ++j)
        for (idx i = 0; i < c_left.rows; ++i) c_left(i, j) -= z(i, j);
    gemm(-1.0, Trans::N, z.view(), Trans::T, d, 1.0, c_right);
}

}  // namespace randutv
