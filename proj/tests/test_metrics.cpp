#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

#include "randutv/errors.hpp"
#include "randutv/jacobi_svd.hpp"
#include "randutv/matrix.hpp"
#include "randutv/matrix_ops.hpp"
#include "randutv/metrics.hpp"
#include "randutv/randutv_blocked.hpp"

using namespace randutv;

TEST_CASE("optimal errors follow directly from the singular values") {
    std::vector<double> sigma{4.0, 3.0, 2.0, 1.0};
    CHECK(optimal_error(sigma, 0, Norm::Spectral) == 4.0);
    CHECK(optimal_error(sigma, 1, Norm::Spectral) == 3.0);
    CHECK(optimal_error(sigma, 4, Norm::Spectral) == 0.0);
    CHECK(optimal_error(sigma, 2, Norm::Frobenius) == doctest::Approx(std::sqrt(5.0)));
    CHECK(optimal_error(sigma, 0, Norm::Frobenius) == doctest::Approx(std::sqrt(30.0)));
    CHECK_THROWS_AS(optimal_error(sigma, -1, Norm::Spectral), IndexError);
}

TEST_CASE("low-rank error against a hand-rolled residual") {
    Matrix a = gaussian_matrix(10, 8, 500);
    UTVConfig cfg;
    cfg.b = 4;
    cfg.q = 1;
    UTVResult r = randutv::randutv(a.view(), cfg);

    const idx k = 3;
    // residual built with explicit loops
    Matrix approx = Matrix::zeros(10, 8);
    for (idx i = 0; i < 10; ++i)
        for (idx j = 0; j < 8; ++j) {
            double s = 0.0;
            for (idx x = 0; x < k; ++x)
                for (idx y = 0; y < 8; ++y) s += r.u(i, x) * r.t(x, y) * r.v(j, y);
            approx(i, j) = s;
        }
    double want = 0.0;
    for (idx j = 0; j < 8; ++j)
        for (idx i = 0; i < 10; ++i) {
            const double d = a(i, j) - approx(i, j);
            want += d * d;
        }
    want = std::sqrt(want);
    CHECK(lowrank_error(a.view(), r, k, Norm::Frobenius) == doctest::Approx(want).epsilon(1e-12));

    // rank 0 keeps nothing; full rank keeps everything
    CHECK(lowrank_error(a.view(), r, 0, Norm::Frobenius) ==
          doctest::Approx(frobenius_norm(a.view())).epsilon(1e-12));
    CHECK(lowrank_error(a.view(), r, 8, Norm::Frobenius) < 1e-12);
    CHECK_THROWS_AS(lowrank_error(a.view(), r, 99, Norm::Frobenius), IndexError);
}

TEST_CASE("an exactly low-rank matrix is captured at its rank") {
    Matrix a = rank_r_matrix(12, 12, 3, 501);
    UTVConfig cfg;
    cfg.b = 4;
    cfg.q = 2;
    UTVResult r = randutv::randutv(a.view(), cfg);
    CHECK(lowrank_error(a.view(), r, 3, Norm::Frobenius) < 1e-11);
    CHECK(lowrank_error(a.view(), r, 2, Norm::Frobenius) > 0.1);
}

TEST_CASE("diagonal accuracy marks exact-zero targets as absolute") {
    UTVResult r;
    r.t = Matrix::zeros(3, 3);
    r.t(0, 0) = 2.1;
    r.t(1, 1) = 0.9;
    r.t(2, 2) = 0.001;
    std::vector<double> sigma{2.0, 1.0, 0.0};
    DiagAccuracy acc = diag_accuracy(sigma, r);
    REQUIRE(acc.err.size() == 3);
    CHECK(acc.err[0] == doctest::Approx(0.05));
    CHECK(acc.is_absolute[0] == false);
    CHECK(acc.err[1] == doctest::Approx(0.1));
    CHECK(acc.err[2] == doctest::Approx(0.001));
    CHECK(acc.is_absolute[2] == true);
}

TEST_CASE("test matrix generators have the advertised spectra") {
    // gaussian: reproducible
    Matrix g1 = gaussian_matrix(6, 5, 502);
    Matrix g2 = gaussian_matrix(6, 5, 502);
    CHECK(std::memcmp(g1.data(), g2.data(), sizeof(double) * 30) == 0);

    // geometric: sigma_i = beta^i
    Matrix ge = geometric_matrix(10, 10, 0.7, 503);
    std::vector<double> s = singular_values(ge.view());
    for (idx i = 0; i < 10; ++i) {
        const double want = std::pow(0.7, static_cast<double>(i));
        CHECK(std::abs(s[static_cast<std::size_t>(i)] - want) / want < 1e-10);
    }

    // rank r: r unit singular values, the rest at round-off
    Matrix rr = rank_r_matrix(9, 7, 4, 504);
    std::vector<double> sr = singular_values(rr.view());
    for (idx i = 0; i < 4; ++i)
        CHECK(sr[static_cast<std::size_t>(i)] == doctest::Approx(1.0).epsilon(1e-12));
    for (idx i = 4; i < 7; ++i) CHECK(sr[static_cast<std::size_t>(i)] < 1e-13);

    Matrix id = identity_matrix(4, 6);
    CHECK(id(2, 2) == 1.0);
    CHECK(id(2, 3) == 0.0);
}

TEST_CASE("named test matrix specs parse or reject cleanly") {
    Matrix a = make_test_matrix("gaussian", 4, 4, 505);
    Matrix b = gaussian_matrix(4, 4, 505);
    CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * 16) == 0);

    Matrix c = make_test_matrix("geometric:0.5", 5, 5, 506);
    Matrix d = geometric_matrix(5, 5, 0.5, 506);
    CHECK(std::memcmp(c.data(), d.data(), sizeof(double) * 25) == 0);

    Matrix e = make_test_matrix("rank:2", 5, 5, 507);
    std::vector<double> se = singular_values(e.view());
    CHECK(se[2] < 1e-13);

    CHECK_NOTHROW(make_test_matrix("identity", 3, 3, 0));
    CHECK_THROWS_AS(make_test_matrix("mystery", 3, 3, 0), ConfigError);
    CHECK_THROWS_AS(make_test_matrix("geometric:fish", 3, 3, 0), ConfigError);
    CHECK_THROWS_AS(make_test_matrix("rank:99", 3, 3, 0), ConfigError);
    CHECK_THROWS_AS(make_test_matrix("geometric:-1", 3, 3, 0), ConfigError);
}

TEST_CASE("scaled time normalizes by the cube of the dimension") {
    CHECK(scaled_time(216.7, 25600) == doctest::Approx(0.12916).epsilon(1e-3));
    CHECK(scaled_time(0.0, 100) == 0.0);
    CHECK_THROWS_AS(scaled_time(1.0, 0), ConfigError);
}

TEST_CASE("quality report rows relate achieved and optimal errors") {
    Matrix a = geometric_matrix(16, 16, 0.8, 508);
    UTVConfig cfg;
    cfg.b = 4;
    cfg.q = 2;
    UTVResult r = randutv::randutv(a.view(), cfg);
    QualityReport rep = quality_report(a.view(), r, {1, 4, 8, 12}, Norm::Frobenius);
    REQUIRE(rep.rows.size() == 4);
    for (const QualityRow& row : rep.rows) {
        CHECK(row.err_utv >= row.err_opt - 1e-12);
        CHECK(row.ratio >= 1.0 - 1e-9);
        CHECK(row.ratio < 3.0);  // two power rounds keep the gap modest
        CHECK(row.diag_relerr < 0.5);
    }
    CHECK_THROWS_AS(quality_report(a.view(), r, {0}, Norm::Frobenius), IndexError);
    CHECK_THROWS_AS(quality_report(a.view(), r, {17}, Norm::Frobenius), IndexError);

    std::string csv = to_csv(rep);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "k,err_utv,err_opt,ratio,diag_relerr");
    CHECK(lines[1].substr(0, 2) == "1,");
}
