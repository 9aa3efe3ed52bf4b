#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "randutv/matrix.hpp"

namespace randutv {

/// Closed set of task types the block algorithm emits; every task carries
/// exactly one member.  Gemm_tn_* compute C = A' B (oz: overwrite, oo:
/// accumulate); Gemm_abta is A <- B' A and Gemm_aabt is A <- A B', both in
/// place on A.
enum class TaskKind : std::uint8_t {
    Generate_normal_random,
    Gemm_tn_oz,
    Gemm_tn_oo,
    Comp_dense_QR,
    Comp_td_QR,
    Copy,
    Apply_right_Q_of_dense_QR,
    Apply_right_Q_td_QR,
    Apply_left_Qt_of_dense_QR,
    Apply_left_Qt_of_td_QR,
    Keep_upper_triang,
    Set_to_zero,
    Svd_of_block,
    Gemm_abta,
    Gemm_aabt,
};

const char* task_kind_name(TaskKind k);

/// Arrays a block operand can live in.  T, U, V are the factorization
/// matrices; G is the Gaussian sample, Y the sketch, Z the sketch's
/// power-round workspace, H the Gram workspace for q > 0.  The rest are
/// per-step b x b scratch: S and X are WY coupling factors (sketch-side and
/// panel-side), E and D are pre-update copies of factored blocks, P and Q
/// hold a block SVD's left/right factors, Pt the transposed left factor used
/// when U is accumulated.
enum class BlockTag : std::uint8_t { T, U, V, G, Y, Z, H, S, X, E, D, P, Q, Pt };

/// Identity of one block operand.  Equality of ids is what the dependence
/// analysis keys on, so two tasks touch the same storage iff their ids match.
struct BlockId {
    BlockTag tag;
    std::int32_t a = 0;  // block row, or step for per-step scratch
    std::int32_t b = 0;  // block col, or ordinal within the step

    auto operator<=>(const BlockId&) const = default;

    std::string str() const;
};

/// One unit of work over b x b blocks: the kind plus its read-only (in) and
/// read-write (inout) operands, in kernel argument order.
struct Task {
    TaskKind kind;
    std::vector<BlockId> in;
    std::vector<BlockId> inout;
    idx step = 0;  // emitting step, recorded in the transcript
};

/// "kind in=[a,b] inout=[c] step=i"
std::string transcript_line(const Task& t);

/// One transcript_line per task, newline separated, trailing newline.
std::string transcript(const std::vector<Task>& tasks);

}  // namespace randutv
