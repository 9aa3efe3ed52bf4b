#pragma once

#include "randutv/matrix.hpp"

namespace randutv {

/// Partition of a matrix into b-by-b tiles, the trailing row/column of tiles
/// ragged when b does not divide the dimensions.  Blocks are views into the
/// parent; no data is copied.
class BlockGrid {
public:
    BlockGrid(Matrix& parent, idx b) : parent_(parent.view()), b_(b) {
        if (b < 1) throw ConfigError("block size must be >= 1, got " + std::to_string(b));
    }
    BlockGrid(MatrixView parent, idx b) : parent_(parent), b_(b) {
        if (b < 1) throw ConfigError("block size must be >= 1, got " + std::to_string(b));
    }

    idx block_rows() const { return (parent_.rows + b_ - 1) / b_; }
    idx block_cols() const { return (parent_.cols + b_ - 1) / b_; }
    idx b() const { return b_; }

    /// Tile (i, j); the last tile in each direction may be smaller than b.
    MatrixView block(idx i, idx j) const {
        if (i < 0 || j < 0 || i >= block_rows() || j >= block_cols())
            throw IndexError("block (" + std::to_string(i) + "," + std::to_string(j) +
                             ") outside " + std::to_string(block_rows()) + "x" +
                             std::to_string(block_cols()) + " grid");
        idx r0 = i * b_;
        idx c0 = j * b_;
        idx nr = parent_.rows - r0 < b_ ? parent_.rows - r0 : b_;
        idx nc = parent_.cols - c0 < b_ ? parent_.cols - c0 : b_;
        return parent_.block(r0, c0, nr, nc);
    }

private:
    MatrixView parent_;
    idx b_;
};

}  // namespace randutv
