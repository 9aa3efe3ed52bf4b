#pragma once

#include <cstdint>

#include "randutv/householder.hpp"
#include "randutv/matrix.hpp"
#include "randutv/rng.hpp"

namespace randutv {

struct UTVConfig {
    idx b = 128;
    int q = 1;
    bool build_u = true;
    bool build_v = true;
    std::uint64_t seed = 0;
    /// For very tall inputs: factor A = Q R first, run the UTV on the square
    /// R, and absorb Q into U.  Off by default.
    bool qr_prepass = false;
};

/// A = U T V' with U, V orthogonal and T upper trapezoidal whose diagonal
/// approximates the singular values in descending order.  Entries of T below
/// the diagonal are exact zeros.  U or V is an empty matrix when its build
/// flag is off.
struct UTVResult {
    Matrix t;
    Matrix u;
    Matrix v;
    UTVConfig config;
};

/// Reference blocked driver: single-threaded, deterministic for a fixed
/// (A, config).  Columns are processed b at a time; each step builds a
/// randomized right transform, a QR-based left transform, and a small SVD
/// that makes the leading b x b block of the step exactly diagonal.  When
/// fewer than b columns remain (or fewer rows than b in the trapezoidal
/// cases), the remaining block is finished with a full dense SVD.
UTVResult randutv(ConstMatrixView a, const UTVConfig& cfg);

/// Packed orthogonal transform of one step, product-ready (WY form).
struct StepTransform {
    Matrix qr;
    std::vector<double> tau;
    Matrix twy;
};

/// Right transform of one step: samples a Gaussian G with b columns, forms
/// the sketch Y = (T22' T22)^q T22' G, and returns its QR factorization.  The
/// implicit full Q aligns the leading columns of T22 V with the dominant
/// singular directions; with q = 0 the sketch is a plain one-pass sample, and
/// each extra q applies one more alternating pair T22 * then T22' * of
/// multiplications.  Consumes rows(t22) * b deviates from rng.
StepTransform build_v_alpha(ConstMatrixView t22, idx b, int q, RngState& rng);

/// Left transform of one step: QR of the leading panel, factored in place
/// (R on top, reflectors below).  The returned transform holds a copy of the
/// packed panel so it stays applicable after the panel is overwritten.
StepTransform build_u_alpha(MatrixView panel);

/// Small factors produced by the diagonalization stage.
struct BetaFactors {
    Matrix u;  // rt x rt, rt = min(rows(t22), bw)
    Matrix v;  // bw x bw
};

/// Diagonalization stage: t22's leading bw-column panel must be the output of
/// build_u_alpha (R in the upper trapezoid).  Replaces the panel with the
/// exact rectangular diagonal of R's singular values, zeroing everything
/// else in the panel, and hits the columns right of the panel with u'.
/// Returns the small factors for accumulating into U, V, and the rows above.
BetaFactors beta_stage(MatrixView t22, idx bw);

}  // namespace randutv
