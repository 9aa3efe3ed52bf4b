#include "randutv/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>

#include "randutv/errors.hpp"
#include "randutv/metrics.hpp"
#include "randutv/randutv_ab.hpp"
#include "randutv/randutv_blocked.hpp"

namespace randutv {

const char* algo_name(Algo a) { return a == Algo::Blocked ? "blocked" : "ab"; }

namespace {

double time_once(ConstMatrixView a, const UTVConfig& cfg, Algo algo, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    if (algo == Algo::Blocked) {
        (void)randutv(a, cfg);
    } else {
        (void)randutv_ab(a, cfg, workers);
    }
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchPlan& plan) {
    if (plan.repeats < 1) throw ConfigError("bench repeats must be positive");
    if (plan.sizes.empty() || plan.bs.empty() || plan.qs.empty() || plan.workers.empty() ||
        plan.algos.empty())
        throw ConfigError("bench plan has an empty axis");

    std::map<idx, Matrix> inputs;  // one Gaussian matrix per size, shared by all configs
    for (idx n : plan.sizes) {
        if (n < 1) throw ConfigError("bench size must be positive");
        inputs.emplace(n, gaussian_matrix(n, n, plan.seed));
    }

    std::vector<BenchRow> rows;
    for (Algo algo : plan.algos) {
        std::vector<int> wlist = algo == Algo::Blocked ? std::vector<int>{1} : plan.workers;
        for (idx n : plan.sizes)
            for (idx b : plan.bs)
                for (int q : plan.qs)
                    for (int w : wlist) {
                        if (algo == Algo::Ab && (n % b != 0)) continue;
                        UTVConfig cfg;
                        cfg.b = b;
                        cfg.q = q;
                        cfg.build_u = cfg.build_v = plan.build_uv;
                        cfg.seed = plan.seed;
                        const ConstMatrixView a = inputs.at(n).view();
                        const std::size_t first = rows.size();
                        for (int r = 0; r < plan.repeats; ++r) {
                            BenchRow row;
                            row.algo = algo;
                            row.n = n;
                            row.b = b;
                            row.q = q;
                            row.workers = w;
                            row.build_uv = plan.build_uv;
                            row.seconds = time_once(a, cfg, algo, w);
                            row.scaled = scaled_time(row.seconds, n);
                            rows.push_back(row);
                        }
                        // flag the median-seconds repeat of this configuration
                        std::vector<std::size_t> order(static_cast<std::size_t>(plan.repeats));
                        for (std::size_t i = 0; i < order.size(); ++i) order[i] = first + i;
                        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
                            return rows[x].seconds < rows[y].seconds;
                        });
                        rows[order[(order.size() - 1) / 2]].median = true;
                    }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "algo,n,b,q,workers,build_uv,seconds,scaled,median\n";
    char buf[256];
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%lld,%lld,%d,%d,%d,%.17g,%.17g,%d\n", algo_name(r.algo),
                      static_cast<long long>(r.n), static_cast<long long>(r.b), r.q, r.workers,
                      r.build_uv ? 1 : 0, r.seconds, r.scaled, r.median ? 1 : 0);
        out += buf;
    }
    return out;
}

}  // namespace randutv
