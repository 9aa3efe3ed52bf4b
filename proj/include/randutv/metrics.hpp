#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randutv/matrix.hpp"
#include "randutv/randutv_blocked.hpp"

namespace randutv {

enum class Norm { Frobenius, Spectral };

/// || A - U(:,0:k) T(0:k,:) V' ||.  Requires U and V in `r`.
/// Spectral norm via power iteration on the residual.
double lowrank_error(ConstMatrixView a, const UTVResult& r, idx k, Norm norm);

/// Best possible rank-k approximation error of `a`, from its singular values:
/// sigma_{k+1} in the spectral norm, sqrt(sum_{i>k} sigma_i^2) in Frobenius.
double optimal_error(ConstMatrixView a, idx k, Norm norm);
double optimal_error(const std::vector<double>& sigma, idx k, Norm norm);

struct DiagAccuracy {
    std::vector<double> err;        // per diagonal entry
    std::vector<bool> is_absolute;  // true where sigma_i == 0 and err is |T(i,i)|
};

/// Relative error |T(i,i) - sigma_i| / sigma_i of each diagonal entry of T
/// against the singular values of `a`; absolute where sigma_i is zero.
DiagAccuracy diag_accuracy(ConstMatrixView a, const UTVResult& r);
DiagAccuracy diag_accuracy(const std::vector<double>& sigma, const UTVResult& r);

/// Deterministic test matrices.
Matrix gaussian_matrix(idx m, idx n, std::uint64_t seed);
/// U diag(beta^i) V' with random orthonormal U, V; singular values decay
/// geometrically from 1.
Matrix geometric_matrix(idx m, idx n, double beta, std::uint64_t seed);
/// Exact rank r: r singular values equal to 1, the rest zero.
Matrix rank_r_matrix(idx m, idx n, idx r, std::uint64_t seed);
Matrix identity_matrix(idx m, idx n);

/// Parses "gaussian", "identity", "geometric:<beta>", "rank:<r>".
Matrix make_test_matrix(const std::string& kind, idx m, idx n, std::uint64_t seed);

/// seconds / n^3, scaled by 1e10 so typical values land near 0.1..10.
double scaled_time(double seconds, idx n);

struct QualityRow {
    idx k = 0;
    double err_utv = 0.0;
    double err_opt = 0.0;
    double ratio = 0.0;
    double diag_relerr = 0.0;
};

struct QualityReport {
    Norm norm = Norm::Frobenius;
    std::vector<QualityRow> rows;
};

/// One row per requested rank k (1-based ranks, 1 <= k <= min(m, n)):
/// achieved low-rank error, optimal error, their ratio, and the relative
/// error of the k-th diagonal entry of T.
QualityReport quality_report(ConstMatrixView a, const UTVResult& r, const std::vector<idx>& ks,
                             Norm norm);

/// CSV with header "k,err_utv,err_opt,ratio,diag_relerr".
std::string to_csv(const QualityReport& rep);

}  // namespace randutv
