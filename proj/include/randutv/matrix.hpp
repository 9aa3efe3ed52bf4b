#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "randutv/errors.hpp"

namespace randutv {

using idx = std::int64_t;

class Matrix;

/// Non-owning mutable window into column-major storage.
/// Element (i, j) lives at data[i + j*ld].
struct MatrixView {
    idx rows = 0;
    idx cols = 0;
    idx ld = 0;
    double* data = nullptr;

    MatrixView() = default;
    MatrixView(idx r, idx c, idx l, double* d) : rows(r), cols(c), ld(l), data(d) {}
    MatrixView(Matrix& m);  // whole-matrix view

    double& operator()(idx i, idx j) const { return data[i + j * ld]; }

    MatrixView block(idx i0, idx j0, idx nr, idx nc) const {
        if (i0 < 0 || j0 < 0 || nr < 0 || nc < 0 || i0 + nr > rows || j0 + nc > cols)
            throw IndexError("subview (" + std::to_string(i0) + "," + std::to_string(j0) +
                             ")+" + std::to_string(nr) + "x" + std::to_string(nc) +
                             " exceeds " + std::to_string(rows) + "x" + std::to_string(cols));
        return MatrixView(nr, nc, ld, data + i0 + j0 * ld);
    }
};

/// Read-only counterpart of MatrixView.
struct ConstMatrixView {
    idx rows = 0;
    idx cols = 0;
    idx ld = 0;
    const double* data = nullptr;

    ConstMatrixView() = default;
    ConstMatrixView(idx r, idx c, idx l, const double* d) : rows(r), cols(c), ld(l), data(d) {}
    ConstMatrixView(const MatrixView& v) : rows(v.rows), cols(v.cols), ld(v.ld), data(v.data) {}
    ConstMatrixView(const Matrix& m);

    double operator()(idx i, idx j) const { return data[i + j * ld]; }

    ConstMatrixView block(idx i0, idx j0, idx nr, idx nc) const {
        if (i0 < 0 || j0 < 0 || nr < 0 || nc < 0 || i0 + nr > rows || j0 + nc > cols)
            throw IndexError("subview (" + std::to_string(i0) + "," + std::to_string(j0) +
                             ")+" + std::to_string(nr) + "x" + std::to_string(nc) +
                             " exceeds " + std::to_string(rows) + "x" + std::to_string(cols));
        return ConstMatrixView(nr, nc, ld, data + i0 + j0 * ld);
    }
};

/// Owning column-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;

    Matrix(idx rows, idx cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0)
            throw ShapeError("negative matrix dimension " + std::to_string(rows) + "x" +
                             std::to_string(cols));
        data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    }

    static Matrix zeros(idx rows, idx cols) { return Matrix(rows, cols); }

    static Matrix identity(idx rows, idx cols) {
        Matrix m(rows, cols);
        idx p = rows < cols ? rows : cols;
        for (idx k = 0; k < p; ++k) m(k, k) = 1.0;
        return m;
    }

    idx rows() const { return rows_; }
    idx cols() const { return cols_; }
    idx ld() const { return rows_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(idx i, idx j) {
        check(i, j);
        return data_[static_cast<std::size_t>(i + j * rows_)];
    }
    double operator()(idx i, idx j) const {
        check(i, j);
        return data_[static_cast<std::size_t>(i + j * rows_)];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    MatrixView view() { return MatrixView(rows_, cols_, rows_, data_.data()); }
    ConstMatrixView view() const { return ConstMatrixView(rows_, cols_, rows_, data_.data()); }

    MatrixView view(idx i0, idx j0, idx nr, idx nc) { return view().block(i0, j0, nr, nc); }
    ConstMatrixView view(idx i0, idx j0, idx nr, idx nc) const {
        return view().block(i0, j0, nr, nc);
    }

private:
    void check(idx i, idx j) const {
        if (i < 0 || j < 0 || i >= rows_ || j >= cols_)
            throw IndexError("element (" + std::to_string(i) + "," + std::to_string(j) +
                             ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    idx rows_ = 0;
    idx cols_ = 0;
    std::vector<double> data_;
};

inline MatrixView::MatrixView(Matrix& m)
    : rows(m.rows()), cols(m.cols()), ld(m.ld()), data(m.data()) {}

inline ConstMatrixView::ConstMatrixView(const Matrix& m)
    : rows(m.rows()), cols(m.cols()), ld(m.ld()), data(m.data()) {}

/// Deep copy of a view into a fresh owning matrix.
Matrix to_matrix(ConstMatrixView a);

/// dst and src must have equal shapes; copies element-wise.
void copy_into(MatrixView dst, ConstMatrixView src);

/// Sets every element of the view to v.
void fill(MatrixView a, double v);

}  // namespace randutv
