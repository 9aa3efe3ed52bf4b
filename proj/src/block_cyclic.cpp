#include "randutv/block_cyclic.hpp"

#include <algorithm>
#include <sstream>

#include "randutv/errors.hpp"

namespace randutv {

void validate(const BlockCyclicSpec& spec) {
    if (spec.m < 0 || spec.n < 0) throw ConfigError("block-cyclic: negative matrix dimensions");
    if (spec.mb < 1 || spec.nb < 1) throw ConfigError("block-cyclic: block dimensions must be >= 1");
    if (spec.p < 1 || spec.q < 1) throw ConfigError("block-cyclic: process grid dimensions must be >= 1");
}

idx block_rows(const BlockCyclicSpec& spec) {
    validate(spec);
    return (spec.m + spec.mb - 1) / spec.mb;
}

idx block_cols(const BlockCyclicSpec& spec) {
    validate(spec);
    return (spec.n + spec.nb - 1) / spec.nb;
}

int owner(const BlockCyclicSpec& spec, idx block_row, idx block_col) {
    validate(spec);
    if (block_row < 0 || block_row >= block_rows(spec) || block_col < 0 || block_col >= block_cols(spec))
        throw IndexError("block-cyclic: block index out of range");
    return static_cast<int>((block_row % spec.p) * spec.q + (block_col % spec.q));
}

std::pair<idx, idx> local_index(const BlockCyclicSpec& spec, idx block_row, idx block_col) {
    validate(spec);
    if (block_row < 0 || block_row >= block_rows(spec) || block_col < 0 || block_col >= block_cols(spec))
        throw IndexError("block-cyclic: block index out of range");
    return {block_row / spec.p, block_col / spec.q};
}

DistributionReport distribution_report(const BlockCyclicSpec& spec) {
    validate(spec);
    DistributionReport rep;
    rep.block_rows = block_rows(spec);
    rep.block_cols = block_cols(spec);
    rep.elements_per_process.assign(static_cast<std::size_t>(spec.p) * spec.q, 0);
    for (idx br = 0; br < rep.block_rows; ++br) {
        const idx h = std::min(spec.mb, spec.m - br * spec.mb);
        for (idx bc = 0; bc < rep.block_cols; ++bc) {
            const idx w = std::min(spec.nb, spec.n - bc * spec.nb);
            rep.elements_per_process[static_cast<std::size_t>(owner(spec, br, bc))] += h * w;
        }
    }
    return rep;
}

std::string ownership_map(const BlockCyclicSpec& spec) {
    validate(spec);
    const idx brs = block_rows(spec);
    const idx bcs = block_cols(spec);
    std::size_t width = 2;  // "P" + at least one digit
    {
        std::ostringstream probe;
        probe << "P" << (static_cast<long long>(spec.p) * spec.q - 1);
        width = probe.str().size();
    }
    std::ostringstream out;
    for (idx br = 0; br < brs; ++br) {
        for (idx bc = 0; bc < bcs; ++bc) {
            std::ostringstream cell;
            cell << "P" << owner(spec, br, bc);
            std::string s = cell.str();
            out << s;
            if (bc + 1 < bcs) {
                for (std::size_t k = s.size(); k < width; ++k) out << ' ';
                out << ' ';
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace randutv
