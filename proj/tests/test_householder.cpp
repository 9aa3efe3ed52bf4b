#include <doctest.h>

#include <cmath>
#include <vector>

#include "randutv/errors.hpp"
#include "randutv/householder.hpp"
#include "randutv/matrix.hpp"
#include "randutv/matrix_ops.hpp"
#include "randutv/rng.hpp"

using namespace randutv;

namespace {

Matrix random_matrix(idx m, idx n, std::uint64_t seed) {
    RngState rng(seed);
    return generate_normal_random(rng, m, n);
}

double max_abs_diff(ConstMatrixView a, ConstMatrixView b) {
    REQUIRE(a.rows == b.rows);
    REQUIRE(a.cols == b.cols);
    double d = 0.0;
    for (idx j = 0; j < a.cols; ++j)
        for (idx i = 0; i < a.rows; ++i) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

// Explicit m x m orthogonal factor, assembled one reflector at a time from
// the packed storage, using nothing but the defining rank-one update
// H_j = I - tau_j v_j v_j'.  Independent of the library's WY machinery.
Matrix explicit_q(const HouseholderFactor& f) {
    const idx m = f.rows();
    Matrix q = Matrix::identity(m, m);
    for (idx j = f.nreflectors() - 1; j >= 0; --j) {
        std::vector<double> v(static_cast<std::size_t>(m), 0.0);
        v[static_cast<std::size_t>(j)] = 1.0;
        for (idx i = j + 1; i < m; ++i) v[static_cast<std::size_t>(i)] = f.qr(i, j);
        for (idx c = 0; c < m; ++c) {
            double dot = 0.0;
            for (idx i = j; i < m; ++i) dot += v[static_cast<std::size_t>(i)] * q(i, c);
            const double w = f.tau[static_cast<std::size_t>(j)] * dot;
            for (idx i = j; i < m; ++i) q(i, c) -= w * v[static_cast<std::size_t>(i)];
        }
    }
    return q;
}

Matrix upper_triangle(const Matrix& packed, idx nrows) {
    Matrix r = Matrix::zeros(nrows, packed.cols());
    for (idx j = 0; j < packed.cols(); ++j)
        for (idx i = 0; i <= j && i < nrows; ++i) r(i, j) = packed(i, j);
    return r;
}

// Classical Gram-Schmidt R with positive diagonal; fine as a reference for
// well-conditioned input.
Matrix gram_schmidt_r(const Matrix& a) {
    const idx m = a.rows(), n = a.cols();
    Matrix q = a;
    Matrix r = Matrix::zeros(n, n);
    for (idx j = 0; j < n; ++j) {
        for (idx k = 0; k < j; ++k) {
            double dot = 0.0;
            for (idx i = 0; i < m; ++i) dot += q(i, k) * q(i, j);
            r(k, j) = dot;
            for (idx i = 0; i < m; ++i) q(i, j) -= dot * q(i, k);
        }
        double nrm = 0.0;
        for (idx i = 0; i < m; ++i) nrm += q(i, j) * q(i, j);
        nrm = std::sqrt(nrm);
        r(j, j) = nrm;
        for (idx i = 0; i < m; ++i) q(i, j) /= nrm;
    }
    return r;
}

double orthogonality_defect(ConstMatrixView q) {
    Matrix qtq(q.cols, q.cols);
    gemm(1.0, Trans::T, q, Trans::N, q, 0.0, qtq.view());
    for (idx i = 0; i < q.cols; ++i) qtq(i, i) -= 1.0;
    return frobenius_norm(qtq.view());
}

}  // namespace

TEST_CASE("packed QR reproduces the input as Q R with non-negative diagonal") {
    for (auto [m, n] : {std::pair<idx, idx>{8, 5}, {5, 5}, {9, 2}}) {
        Matrix a = random_matrix(m, n, 100 + static_cast<std::uint64_t>(m));
        HouseholderFactor f = hqr(a.view());
        for (idx j = 0; j < n; ++j) CHECK(f.qr(j, j) >= 0.0);

        Matrix q = explicit_q(f);
        CHECK(orthogonality_defect(q.view()) < 1e-13);

        Matrix r = upper_triangle(f.qr, m);
        Matrix qr(m, n);
        gemm(1.0, Trans::N, q.view(), Trans::N, r.view(), 0.0, qr.view());
        CHECK(max_abs_diff(qr.view(), a.view()) < 1e-13);
    }
}

TEST_CASE("reflector scales satisfy tau (v'v) = 2") {
    Matrix a = random_matrix(7, 4, 11);
    HouseholderFactor f = hqr(a.view());
    for (idx j = 0; j < 4; ++j) {
        double vtv = 1.0;
        for (idx i = j + 1; i < 7; ++i) vtv += f.qr(i, j) * f.qr(i, j);
        CHECK(f.tau[static_cast<std::size_t>(j)] * vtv == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("QR of an already-triangular matrix uses identity reflectors") {
    Matrix a = Matrix::zeros(4, 4);
    for (idx j = 0; j < 4; ++j)
        for (idx i = 0; i <= j; ++i) a(i, j) = static_cast<double>(1 + i + j);
    HouseholderFactor f = hqr(a.view());
    for (idx j = 0; j < 4; ++j) CHECK(f.tau[static_cast<std::size_t>(j)] == 0.0);
    CHECK(max_abs_diff(f.qr.view(), a.view()) == 0.0);
}

TEST_CASE("QR handles a negated triangular matrix and a zero column") {
    // negative diagonal head with no tail: reflector must flip the sign
    Matrix a = Matrix::identity(3, 3);
    a(0, 0) = -2.0;
    HouseholderFactor f = hqr(a.view());
    CHECK(f.qr(0, 0) == 2.0);
    CHECK(f.tau[0] == 2.0);

    Matrix z = Matrix::zeros(5, 3);
    z(0, 1) = 1.0;  // column 0 entirely zero
    HouseholderFactor fz = hqr(z.view());
    Matrix q = explicit_q(fz);
    Matrix r = upper_triangle(fz.qr, 5);
    Matrix qr(5, 3);
    gemm(1.0, Trans::N, q.view(), Trans::N, r.view(), 0.0, qr.view());
    CHECK(max_abs_diff(qr.view(), z.view()) < 1e-14);
}

TEST_CASE("QR matches Gram-Schmidt on a well-conditioned matrix") {
    Matrix a = random_matrix(10, 6, 42);
    for (idx i = 0; i < 6; ++i) a(i, i) += 8.0;  // keep columns strongly independent
    HouseholderFactor f = hqr(a.view());
    Matrix r_house = upper_triangle(f.qr, 6);
    Matrix r_gs = gram_schmidt_r(a);
    CHECK(max_abs_diff(r_house.view(), r_gs.view()) < 1e-11);
}

TEST_CASE("WY coupling factor reproduces the reflector product") {
    Matrix a = random_matrix(7, 4, 55);
    HouseholderFactor f = hqr(a.view());
    Matrix twy = form_wy_t(f.qr.view(), f.tau);
    for (idx j = 0; j < 4; ++j)
        for (idx i = j + 1; i < 4; ++i) CHECK(twy(i, j) == 0.0);

    // I - W Twy W' against the one-at-a-time product
    Matrix w = Matrix::zeros(7, 4);
    for (idx j = 0; j < 4; ++j) {
        w(j, j) = 1.0;
        for (idx i = j + 1; i < 7; ++i) w(i, j) = f.qr(i, j);
    }
    Matrix wt(7, 4);
    gemm(1.0, Trans::N, w.view(), Trans::N, twy.view(), 0.0, wt.view());
    Matrix q = Matrix::identity(7, 7);
    gemm(-1.0, Trans::N, wt.view(), Trans::T, w.view(), 1.0, q.view());
    CHECK(max_abs_diff(q.view(), explicit_q(f).view()) < 1e-13);
}

TEST_CASE("blocked applications act like multiplying by the explicit factor") {
    Matrix a = random_matrix(8, 4, 60);
    CompactWY f = form_compact_wy(hqr(a.view()));
    HouseholderFactor hf{f.qr, hqr(a.view()).tau};
    Matrix q = explicit_q(hf);

    Matrix b = random_matrix(8, 3, 61);
    Matrix want(8, 3);

    Matrix got = b;
    apply_qt_left(f.qr.view(), f.twy.view(), got.view());
    gemm(1.0, Trans::T, q.view(), Trans::N, b.view(), 0.0, want.view());
    CHECK(max_abs_diff(got.view(), want.view()) < 1e-13);

    got = b;
    apply_q_left(f.qr.view(), f.twy.view(), got.view());
    gemm(1.0, Trans::N, q.view(), Trans::N, b.view(), 0.0, want.view());
    CHECK(max_abs_diff(got.view(), want.view()) < 1e-13);

    Matrix c = random_matrix(5, 8, 62);
    Matrix wantc(5, 8);
    Matrix gotc = c;
    apply_q_right(f.qr.view(), f.twy.view(), gotc.view());
    gemm(1.0, Trans::N, c.view(), Trans::N, q.view(), 0.0, wantc.view());
    CHECK(max_abs_diff(gotc.view(), wantc.view()) < 1e-13);

    gotc = c;
    apply_qt_right(f.qr.view(), f.twy.view(), gotc.view());
    gemm(1.0, Trans::N, c.view(), Trans::T, q.view(), 0.0, wantc.view());
    CHECK(max_abs_diff(gotc.view(), wantc.view()) < 1e-13);
}

TEST_CASE("application kernels validate operand shapes") {
    Matrix a = random_matrix(6, 3, 63);
    CompactWY f = form_compact_wy(hqr(a.view()));
    Matrix wrong(4, 2);
    CHECK_THROWS_AS(apply_qt_left(f.qr.view(), f.twy.view(), wrong.view()), ShapeError);
    CHECK_THROWS_AS(apply_q_right(f.qr.view(), f.twy.view(), wrong.view()), ShapeError);
}

TEST_CASE("form_q returns orthonormal leading columns of the factor") {
    Matrix a = random_matrix(9, 4, 70);
    HouseholderFactor f = hqr(a.view());
    Matrix q4 = form_q(f, 4);
    CHECK(q4.rows() == 9);
    CHECK(orthogonality_defect(q4.view()) < 1e-13);
    Matrix qfull = explicit_q(f);
    CHECK(max_abs_diff(q4.view(), qfull.view(0, 0, 9, 4)) < 1e-13);
}

TEST_CASE("triangular-on-dense QR agrees with plain QR of the stacked matrix") {
    const idx b = 4, l = 6;
    Matrix r0 = upper_triangle(random_matrix(b, b, 80), b);
    for (idx j = 0; j < b; ++j) r0(j, j) += 3.0;
    Matrix d0 = random_matrix(l, b, 81);

    // oracle: stack [R; D] and factor it the ordinary way
    Matrix stacked(b + l, b);
    copy_into(stacked.view(0, 0, b, b), r0.view());
    copy_into(stacked.view(b, 0, l, b), d0.view());
    HouseholderFactor sf = hqr(stacked.view());

    TdQRFactor td = comp_td_qr(r0.view(), d0.view());
    CHECK(max_abs_diff(upper_triangle(td.r, b).view(), upper_triangle(sf.qr, b).view()) < 1e-13);
    CHECK(max_abs_diff(td.d.view(), sf.qr.view(b, 0, l, b)) < 1e-13);
    for (idx j = 0; j < b; ++j)
        CHECK(td.tau[static_cast<std::size_t>(j)] ==
              doctest::Approx(sf.tau[static_cast<std::size_t>(j)]).epsilon(1e-13));
    for (idx j = 0; j < b; ++j) CHECK(td.r(j, j) >= 0.0);
}

TEST_CASE("triangular-on-dense QR leaves the strictly-lower part of R alone") {
    const idx b = 3, l = 4;
    Matrix r0 = upper_triangle(random_matrix(b, b, 82), b);
    for (idx j = 0; j < b; ++j) r0(j, j) += 2.0;
    Matrix d0 = random_matrix(l, b, 83);
    // plant sentinels where a dense factorization would write reflector data
    Matrix r = r0;
    r(1, 0) = 111.0;
    r(2, 0) = 222.0;
    r(2, 1) = 333.0;
    Matrix d = d0;
    comp_td_qr_inplace(r.view(), d.view());
    CHECK(r(1, 0) == 111.0);
    CHECK(r(2, 0) == 222.0);
    CHECK(r(2, 1) == 333.0);
}

TEST_CASE("triangular-on-dense applications match stacked dense applications") {
    const idx b = 4, l = 5, nc = 3;
    Matrix r0 = upper_triangle(random_matrix(b, b, 84), b);
    for (idx j = 0; j < b; ++j) r0(j, j) += 3.0;
    Matrix d0 = random_matrix(l, b, 85);
    TdQRFactor td = comp_td_qr(r0.view(), d0.view());

    Matrix stacked(b + l, b);
    copy_into(stacked.view(0, 0, b, b), r0.view());
    copy_into(stacked.view(b, 0, l, b), d0.view());
    CompactWY sf = form_compact_wy(hqr(stacked.view()));

    // left: Q' applied to a stacked right-hand side
    Matrix top = random_matrix(b, nc, 86);
    Matrix bot = random_matrix(l, nc, 87);
    Matrix stacked_b(b + l, nc);
    copy_into(stacked_b.view(0, 0, b, nc), top.view());
    copy_into(stacked_b.view(b, 0, l, nc), bot.view());
    apply_qt_left(sf.qr.view(), sf.twy.view(), stacked_b.view());

    apply_qt_left_td(td.d.view(), td.twy.view(), top.view(), bot.view());
    CHECK(max_abs_diff(top.view(), stacked_b.view(0, 0, b, nc)) < 1e-12);
    CHECK(max_abs_diff(bot.view(), stacked_b.view(b, 0, l, nc)) < 1e-12);

    // right: Q applied from the right to a split row block
    Matrix left = random_matrix(nc, b, 88);
    Matrix right = random_matrix(nc, l, 89);
    Matrix joined(nc, b + l);
    copy_into(joined.view(0, 0, nc, b), left.view());
    copy_into(joined.view(0, b, nc, l), right.view());
    apply_q_right(sf.qr.view(), sf.twy.view(), joined.view());

    apply_q_right_td(td.d.view(), td.twy.view(), left.view(), right.view());
    CHECK(max_abs_diff(left.view(), joined.view(0, 0, nc, b)) < 1e-12);
    CHECK(max_abs_diff(right.view(), joined.view(0, b, nc, l)) < 1e-12);
}

TEST_CASE("triangular-on-dense QR annihilates the dense block") {
    const idx b = 5, l = 7;
    Matrix r0 = upper_triangle(random_matrix(b, b, 90), b);
    Matrix d0 = random_matrix(l, b, 91);
    TdQRFactor td = comp_td_qr(r0.view(), d0.view());

    // Q' [R0; D0] must come out as [R_new; 0]
    Matrix top = r0;
    Matrix bot = d0;
    apply_qt_left_td(td.d.view(), td.twy.view(), top.view(), bot.view());
    CHECK(max_abs_diff(top.view(), upper_triangle(td.r, b).view()) < 1e-12);
    CHECK(frobenius_norm(bot.view()) < 1e-12);
}
