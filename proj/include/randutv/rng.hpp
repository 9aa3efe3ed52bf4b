#pragma once

#include <cstdint>

#include "randutv/matrix.hpp"

namespace randutv {

/// Counter-based random stream: deviate number d of stream `seed` is a pure
/// function of (seed, d), so any prefix can be skipped or replayed and
/// concurrent consumers with distinct streams never contend.  State is just
/// the position of the next deviate.
///
/// The integer layer mixes seed + (counter+1) * 0x9E3779B97F4A7C15 through a
/// splitmix-style finalizer; normal deviates come from the trigonometric
/// Box-Muller transform, with consecutive deviates 2p and 2p+1 sharing the
/// uniform pair (u_{2p}, u_{2p+1}).
struct RngState {
    std::uint64_t seed = 0;
    std::uint64_t pos = 0;

    explicit RngState(std::uint64_t s = 0, std::uint64_t start = 0) : seed(s), pos(start) {}

    /// Raw 64-bit word c of the stream.
    std::uint64_t word(std::uint64_t c) const;

    /// Uniform deviate in (0, 1]; never returns 0, so log() is safe.
    double uniform(std::uint64_t c) const;

    /// Standard normal deviate number d of this stream.
    double normal_at(std::uint64_t d) const;

    /// Next standard normal deviate; advances the position.
    double next_normal() { return normal_at(pos++); }

    /// Independent derived stream; used to give each generation task its own
    /// schedule-invariant deviates.
    RngState substream(std::uint64_t a, std::uint64_t b) const;
};

/// Fills the view with standard normal deviates in column-major order,
/// consuming rows*cols positions of the stream.
void generate_normal_random(RngState& rng, MatrixView a);

/// Convenience allocator form.
Matrix generate_normal_random(RngState& rng, idx rows, idx cols);

}  // namespace randutv
