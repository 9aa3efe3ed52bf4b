#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "randutv/matrix.hpp"

namespace randutv {

enum class Algo { Blocked, Ab };

const char* algo_name(Algo a);  // "blocked" / "ab"

/// One timed factorization.  `scaled` is scaled_time(seconds, n), kept exact
/// by construction; `median` is set on the repeat whose wall time is the
/// median of its configuration.
struct BenchRow {
    Algo algo = Algo::Blocked;
    idx n = 0;
    idx b = 0;
    int q = 0;
    int workers = 1;
    bool build_uv = true;
    double seconds = 0.0;
    double scaled = 0.0;
    bool median = false;
};

/// Sweep grid.  Configurations are the cross product algos x sizes x bs x qs
/// x workers, each run `repeats` times on the same seeded Gaussian input.
/// The blocked driver is single threaded, so its configurations collapse the
/// workers axis to {1}; task-parallel configurations where b does not divide
/// n are dropped (the grid naturally mixes combinations that only one
/// algorithm accepts).  Rows appear in sweep order, repeats adjacent.
struct BenchPlan {
    std::vector<Algo> algos{Algo::Blocked, Algo::Ab};
    std::vector<idx> sizes;
    std::vector<idx> bs;
    std::vector<int> qs{1};
    std::vector<int> workers{1};
    int repeats = 3;
    bool build_uv = true;
    std::uint64_t seed = 0;
};

std::vector<BenchRow> run_bench(const BenchPlan& plan);

/// CSV with header "algo,n,b,q,workers,build_uv,seconds,scaled,median";
/// build_uv and median printed as 0/1, times with %.17g.
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace randutv
