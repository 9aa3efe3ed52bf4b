#pragma once

#include <string>
#include <utility>
#include <vector>

#include "randutv/matrix.hpp"

namespace randutv {

/// Two-dimensional block-cyclic distribution of an m x n matrix split into
/// mb x nb blocks over a p x q process grid.  Processes are numbered
/// row-major over the grid.
struct BlockCyclicSpec {
    idx m = 0;
    idx n = 0;
    idx mb = 1;
    idx nb = 1;
    int p = 1;
    int q = 1;
};

void validate(const BlockCyclicSpec& spec);

/// Number of block rows / cols (trailing blocks ragged).
idx block_rows(const BlockCyclicSpec& spec);
idx block_cols(const BlockCyclicSpec& spec);

/// Owning process of block (block_row, block_col):
///   (block_row mod p) * q + (block_col mod q).
int owner(const BlockCyclicSpec& spec, idx block_row, idx block_col);

/// Position of the block within its owner's local block array:
///   (block_row div p, block_col div q).
std::pair<idx, idx> local_index(const BlockCyclicSpec& spec, idx block_row, idx block_col);

struct DistributionReport {
    idx block_rows = 0;
    idx block_cols = 0;
    std::vector<idx> elements_per_process;  // indexed by process id, p*q entries
};

/// Exact element counts per process, ragged trailing blocks included.
DistributionReport distribution_report(const BlockCyclicSpec& spec);

/// ASCII ownership map: one text row per block row, cells "P<owner>".
std::string ownership_map(const BlockCyclicSpec& spec);

}  // namespace randutv
