#pragma once

#include <vector>

#include "randutv/matrix.hpp"

namespace randutv {

/// Packed Householder QR: R on and above the diagonal with non-negative
/// diagonal entries, reflector j stored below the diagonal of column j with
/// its unit head implicit.  tau[j] scales reflector j; tau[j] * (v_j' v_j) = 2
/// for every nontrivial reflector.
struct HouseholderFactor {
    Matrix qr;
    std::vector<double> tau;

    idx rows() const { return qr.rows(); }
    idx cols() const { return qr.cols(); }
    idx nreflectors() const { return static_cast<idx>(tau.size()); }
};

/// Unblocked QR factorization, overwriting `a` with the packed form.
/// Returns the reflector scales.  Works for any m x n; min(m, n) reflectors.
std::vector<double> hqr_inplace(MatrixView a);

/// Copying convenience wrapper around hqr_inplace.
HouseholderFactor hqr(ConstMatrixView a);

/// Upper-triangular WY coupling factor Twy with
///   H_1 H_2 ... H_p = I - W Twy W',
/// W the unit-lower-trapezoidal reflector matrix packed in `qr`.  Built by the
/// forward recurrence Twy(j,j) = tau_j,
/// Twy(0:j, j) = -tau_j * Twy(0:j, 0:j) * (W(:, 0:j)' v_j).
Matrix form_wy_t(ConstMatrixView qr, const std::vector<double>& tau);

/// Block reflector in product-ready form: packed reflectors plus Twy.
struct CompactWY {
    Matrix qr;
    Matrix twy;
};

CompactWY form_compact_wy(const HouseholderFactor& f);

/// B <- Q' B   computed as B - W (Twy' (W' B)).
void apply_qt_left(ConstMatrixView qr, ConstMatrixView twy, MatrixView b);
/// B <- Q B    computed as B - W (Twy (W' B)).
void apply_q_left(ConstMatrixView qr, ConstMatrixView twy, MatrixView b);
/// B <- B Q    computed as B - ((B W) Twy) W'.
void apply_q_right(ConstMatrixView qr, ConstMatrixView twy, MatrixView b);
/// B <- B Q'   computed as B - ((B W) Twy') W'.
void apply_qt_right(ConstMatrixView qr, ConstMatrixView twy, MatrixView b);

/// Explicit leading ncols columns of Q, by applying the reflectors to the
/// identity.  ncols <= rows.
Matrix form_q(const HouseholderFactor& f, idx ncols);

/// QR of a b x b upper-triangular block stacked on an l x b dense block:
///   [ R ]            [ R_new ]
///   [ D ]  =  Q_td * [   0   ]
/// Reflector j has a unit head in row j of R and a dense tail in column j of
/// D; nothing below R's diagonal is touched, so reflector data a previous
/// dense QR left there survives.  On exit R holds R_new (diagonal
/// non-negative), D holds the reflector tails, and the returned taus scale
/// them.  Costs O(b^2 (b + l)), against O(b^2 (2 b / 3 + l) + b^2 l) style
/// re-factorization of the stacked matrix without the structure.
std::vector<double> comp_td_qr_inplace(MatrixView r, MatrixView d);

/// Twy for the triangular-on-dense reflectors: with W = [I_b; D], the top
/// parts of distinct reflectors are orthogonal, so the recurrence reads
/// Twy(0:j, j) = -tau_j * Twy(0:j, 0:j) * (D(:, 0:j)' d_j).
Matrix form_td_wy_t(ConstMatrixView d, const std::vector<double>& tau);

/// Value-returning form used by tests and by callers that keep R/D intact.
struct TdQRFactor {
    Matrix r;    // b x b, R_new in the upper triangle
    Matrix d;    // l x b reflector tails
    std::vector<double> tau;
    Matrix twy;  // b x b upper triangular
};

TdQRFactor comp_td_qr(ConstMatrixView r, ConstMatrixView d);

/// [B_top; B_bot] <- Q_td' [B_top; B_bot], with B_top b x q and B_bot l x q:
///   Z = Twy' (B_top + D' B_bot);  B_top -= Z;  B_bot -= D Z.
void apply_qt_left_td(ConstMatrixView d, ConstMatrixView twy, MatrixView b_top, MatrixView b_bot);

/// [C_left, C_right] <- [C_left, C_right] Q_td, with C_left q x b, C_right q x l:
///   Z = (C_left + C_right D) Twy;  C_left -= Z;  C_right -= Z D'.
void apply_q_right_td(ConstMatrixView d, ConstMatrixView twy, MatrixView c_left, MatrixView c_right);

}  // namespace randutv
