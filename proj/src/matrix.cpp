#include "randutv/matrix.hpp"

namespace randutv {

Matrix to_matrix(ConstMatrixView a) {
    Matrix m(a.rows, a.cols);
    for (idx j = 0; j < a.cols; ++j)
        for (idx i = 0; i < a.rows; ++i) m(i, j) = a(i, j);
    return m;
}

void copy_into(MatrixView dst, ConstMatrixView src) {
    if (dst.rows != src.rows || dst.cols != src.cols)
        throw ShapeError("copy_into " + std::to_string(src.rows) + "x" + std::to_string(src.cols) +
                         " into " + std::to_string(dst.rows) + "x" + std::to_string(dst.cols));
    for (idx j = 0; j < dst.cols; ++j)
        for (idx i = 0; i < dst.rows; ++i) dst(i, j) = src(i, j);
}

void fill(MatrixView a, double v) {
    for (idx j = 0; j < a.cols; ++j)
        for (idx i = 0; i < a.rows; ++i) a(i, j) = v;
}

}  // namespace randutv
