#include "randutv/rng.hpp"

#include <cmath>

namespace randutv {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

std::uint64_t RngState::word(std::uint64_t c) const { return mix64(seed + (c + 1) * kGolden); }

double RngState::uniform(std::uint64_t c) const {
    // Top 53 bits, shifted into (0, 1]; excluding 0 keeps log() finite.
    return static_cast<double>((word(c) >> 11) + 1) * 0x1.0p-53;
}

double RngState::normal_at(std::uint64_t d) const {
    const std::uint64_t p = d >> 1;
    const double u1 = uniform(2 * p);
    const double u2 = static_cast<double>(word(2 * p + 1) >> 11) * 0x1.0p-53;  // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * 3.14159265358979323846 * u2;
    return (d & 1) == 0 ? r * std::cos(th) : r * std::sin(th);
}

RngState RngState::substream(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s =
        mix64(seed + 0xA24BAED4963EE407ULL * (a + 1) + 0x9FB21C651E98DF25ULL * (b + 1));
    return RngState(s, 0);
}

void generate_normal_random(RngState& rng, MatrixView a) {
    for (idx j = 0; j < a.cols; ++j)
        for (idx i = 0; i < a.rows; ++i) a(i, j) = rng.next_normal();
}

Matrix generate_normal_random(RngState& rng, idx rows, idx cols) {
    Matrix m(rows, cols);
    generate_normal_random(rng, m.view());
    return m;
}

}  // namespace randutv
