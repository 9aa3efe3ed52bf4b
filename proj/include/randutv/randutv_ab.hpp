#pragma once

#include <map>

#include "randutv/randutv_blocked.hpp"
#include "randutv/scheduler.hpp"
#include "randutv/tasks.hpp"

namespace randutv {

/// Emits the full task stream for an m x n problem (b must divide both
/// dimensions).  The stream is a pure function of (m, n, b, q, build_u,
/// build_v): values never influence it.  Each column step emits the sketch
/// (generation plus transposed block gemms, with Gram-based power rounds for
/// q > 0), the sketch QR and its right-applications, the panel QR and its
/// left-applications, panel finalization, and the block SVD with its strip
/// and accumulation updates; a final column narrower than the grid is
/// finished by an updating QR plus one block SVD.
std::vector<Task> analyze(idx m, idx n, const UTVConfig& cfg);
std::vector<Task> analyze(ConstMatrixView a, const UTVConfig& cfg);

/// Backing storage for one algorithm-by-blocks run: the factorization
/// matrices, the sketch workspaces, and every per-step scratch block named by
/// the task stream.  resolve() maps a block id to its live b x b view.
struct AbStorage {
    idx b = 0;
    std::uint64_t seed = 0;
    Matrix t, u, v;
    Matrix g, y, z, gram;
    std::map<BlockId, Matrix> scratch;

    AbStorage(ConstMatrixView a, const UTVConfig& cfg, const std::vector<Task>& tasks);

    MatrixView resolve(const BlockId& id);
};

/// Runs one task's kernel against the storage.  Kernels touch only their
/// operands (plus kernel-local temporaries), which is what makes the
/// dependence analysis in build_dag sufficient.
void execute_task(AbStorage& st, const Task& task);

/// Dependency-scheduled factorization: same contract as randutv(), same
/// invariants, executed as a task DAG on `workers` threads.  The result is
/// bitwise identical for any worker count, and T's below-diagonal entries are
/// exact zeros.  Requires b to divide both m and n.
UTVResult randutv_ab(ConstMatrixView a, const UTVConfig& cfg, int workers);

/// As randutv_ab, also returning the execution trace.
UTVResult randutv_ab_traced(ConstMatrixView a, const UTVConfig& cfg, int workers,
                            std::vector<TraceEvent>& trace_out);

}  // namespace randutv
