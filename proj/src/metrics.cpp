#include "randutv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "randutv/errors.hpp"
#include "randutv/householder.hpp"
#include "randutv/jacobi_svd.hpp"
#include "randutv/matrix_ops.hpp"
#include "randutv/rng.hpp"

namespace randutv {

namespace {

double matrix_norm(ConstMatrixView a, Norm norm) {
    return norm == Norm::Frobenius ? frobenius_norm(a) : spectral_norm_estimate(a);
}

/// Orthonormal m x p factor from a seeded Gaussian draw.
Matrix random_orthonormal(idx m, idx p, RngState& rng) {
    Matrix g = generate_normal_random(rng, m, p);
    return form_q(hqr(g.view()), p);
}

}  // namespace

double lowrank_error(ConstMatrixView a, const UTVResult& r, idx k, Norm norm) {
    const idx m = a.rows, n = a.cols;
    const idx p = std::min(m, n);
    if (r.t.rows() != m || r.t.cols() != n) throw ShapeError("lowrank_error: T does not match A");
    if (r.u.rows() != m || r.u.cols() != m || r.v.rows() != n || r.v.cols() != n)
        throw ShapeError("lowrank_error: needs square U and V matching A");
    if (k < 0 || k > p) throw IndexError("lowrank_error: rank out of range");

    // W = T(0:k, :) V',   E = A - U(:, 0:k) W
    Matrix w(k, n);
    gemm(1.0, Trans::N, r.t.view(0, 0, k, n), Trans::T, r.v.view(), 0.0, w.view());
    Matrix e = to_matrix(a);
    gemm(-1.0, Trans::N, r.u.view(0, 0, m, k), Trans::N, w.view(), 1.0, e.view());
    return matrix_norm(e.view(), norm);
}

double optimal_error(const std::vector<double>& sigma, idx k, Norm norm) {
    const idx p = static_cast<idx>(sigma.size());
    if (k < 0) throw IndexError("optimal_error: negative rank");
    if (k >= p) return 0.0;
    if (norm == Norm::Spectral) return sigma[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (idx i = p - 1; i >= k; --i) {
        const double v = sigma[static_cast<std::size_t>(i)];
        s += v * v;
    }
    return std::sqrt(s);
}

double optimal_error(ConstMatrixView a, idx k, Norm norm) {
    return optimal_error(singular_values(a), k, norm);
}

DiagAccuracy diag_accuracy(const std::vector<double>& sigma, const UTVResult& r) {
    const idx p = std::min(r.t.rows(), r.t.cols());
    if (static_cast<idx>(sigma.size()) < p)
        throw ShapeError("diag_accuracy: fewer singular values than diagonal entries");
    DiagAccuracy acc;
    acc.err.reserve(static_cast<std::size_t>(p));
    acc.is_absolute.reserve(static_cast<std::size_t>(p));
    for (idx i = 0; i < p; ++i) {
        const double s = sigma[static_cast<std::size_t>(i)];
        const double d = r.t(i, i);
        if (s > 0.0) {
            acc.err.push_back(std::abs(d - s) / s);
            acc.is_absolute.push_back(false);
        } else {
            acc.err.push_back(std::abs(d));
            acc.is_absolute.push_back(true);
        }
    }
    return acc;
}

DiagAccuracy diag_accuracy(ConstMatrixView a, const UTVResult& r) {
    return diag_accuracy(singular_values(a), r);
}

Matrix gaussian_matrix(idx m, idx n, std::uint64_t seed) {
    RngState rng(seed);
    return generate_normal_random(rng, m, n);
}

Matrix geometric_matrix(idx m, idx n, double beta, std::uint64_t seed) {
    if (!(beta > 0.0)) throw ConfigError("geometric_matrix: decay factor must be positive");
    const idx p = std::min(m, n);
    if (p == 0) return Matrix::zeros(m, n);
    RngState rng(seed);
    Matrix u = random_orthonormal(m, p, rng);
    Matrix v = random_orthonormal(n, p, rng);
    double s = 1.0;
    for (idx j = 0; j < p; ++j) {
        for (idx i = 0; i < m; ++i) u(i, j) *= s;
        s *= beta;
    }
    Matrix a(m, n);
    gemm(1.0, Trans::N, u.view(), Trans::T, v.view(), 0.0, a.view());
    return a;
}

Matrix rank_r_matrix(idx m, idx n, idx r, std::uint64_t seed) {
    const idx p = std::min(m, n);
    if (r < 0 || r > p) throw ConfigError("rank_r_matrix: rank out of range");
    if (r == 0) return Matrix::zeros(m, n);
    RngState rng(seed);
    Matrix u = random_orthonormal(m, p, rng);
    Matrix v = random_orthonormal(n, p, rng);
    Matrix a(m, n);
    gemm(1.0, Trans::N, u.view(0, 0, m, r), Trans::T, v.view(0, 0, n, r), 0.0, a.view());
    return a;
}

Matrix identity_matrix(idx m, idx n) {
    Matrix a = Matrix::zeros(m, n);
    for (idx i = 0; i < std::min(m, n); ++i) a(i, i) = 1.0;
    return a;
}

Matrix make_test_matrix(const std::string& kind, idx m, idx n, std::uint64_t seed) {
    if (kind == "gaussian") return gaussian_matrix(m, n, seed);
    if (kind == "identity") return identity_matrix(m, n);
    const auto colon = kind.find(':');
    if (colon != std::string::npos) {
        const std::string name = kind.substr(0, colon);
        const std::string arg = kind.substr(colon + 1);
        char* end = nullptr;
        if (name == "geometric") {
            const double beta = std::strtod(arg.c_str(), &end);
            if (end == arg.c_str() || *end != '\0')
                throw ConfigError("make_test_matrix: bad decay factor '" + arg + "'");
            return geometric_matrix(m, n, beta, seed);
        }
        if (name == "rank") {
            const long long r = std::strtoll(arg.c_str(), &end, 10);
            if (end == arg.c_str() || *end != '\0')
                throw ConfigError("make_test_matrix: bad rank '" + arg + "'");
            return rank_r_matrix(m, n, static_cast<idx>(r), seed);
        }
    }
    throw ConfigError("make_test_matrix: unknown kind '" + kind +
                      "' (expected gaussian, identity, geometric:<beta>, rank:<r>)");
}

double scaled_time(double seconds, idx n) {
    if (n < 1) throw ConfigError("scaled_time: n must be >= 1");
    const double nn = static_cast<double>(n);
    return seconds / (nn * nn * nn) * 1e10;
}

QualityReport quality_report(ConstMatrixView a, const UTVResult& r, const std::vector<idx>& ks,
                             Norm norm) {
    const idx p = std::min(a.rows, a.cols);
    const std::vector<double> sigma = singular_values(a);
    QualityReport rep;
    rep.norm = norm;
    rep.rows.reserve(ks.size());
    for (idx k : ks) {
        if (k < 1 || k > p) throw IndexError("quality_report: ranks must satisfy 1 <= k <= min(m, n)");
        QualityRow row;
        row.k = k;
        row.err_utv = lowrank_error(a, r, k, norm);
        row.err_opt = optimal_error(sigma, k, norm);
        if (row.err_opt > 0.0)
            row.ratio = row.err_utv / row.err_opt;
        else
            row.ratio = row.err_utv == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        const double s = sigma[static_cast<std::size_t>(k - 1)];
        const double d = r.t(k - 1, k - 1);
        row.diag_relerr = s > 0.0 ? std::abs(d - s) / s : std::abs(d);
        rep.rows.push_back(row);
    }
    return rep;
}

std::string to_csv(const QualityReport& rep) {
    std::ostringstream out;
    out << "k,err_utv,err_opt,ratio,diag_relerr\n";
    char buf[128];
    for (const QualityRow& row : rep.rows) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g\n",
                      static_cast<long long>(row.k), row.err_utv, row.err_opt, row.ratio,
                      row.diag_relerr);
        out << buf;
    }
    return out.str();
}

}  // namespace randutv
