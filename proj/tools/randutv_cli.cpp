// randutv: factorize matrices from files, run benchmark sweeps, self-verify,
// emit execution traces, print block-cyclic layouts, generate test matrices.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "randutv/bench.hpp"
#include "randutv/block_cyclic.hpp"
#include "randutv/errors.hpp"
#include "randutv/householder.hpp"
#include "randutv/jacobi_svd.hpp"
#include "randutv/matrix.hpp"
#include "randutv/matrix_io.hpp"
#include "randutv/matrix_ops.hpp"
#include "randutv/metrics.hpp"
#include "randutv/randutv_ab.hpp"
#include "randutv/randutv_blocked.hpp"
#include "randutv/scheduler.hpp"

using namespace randutv;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int default_workers() {
    if (const char* env = std::getenv("RANDUTV_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
        std::fprintf(stderr, "warning: ignoring invalid RANDUTV_WORKERS=%s\n", env);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// 0 means "not set": 128 for the blocked driver, 256 for the task-parallel one
idx pick_b(idx b, const std::string& algo) {
    if (b > 0) return b;
    return algo == "ab" ? 256 : 128;
}

double orthogonality_defect(ConstMatrixView q) {
    Matrix g(q.cols, q.cols);
    gemm(1.0, Trans::T, q, Trans::N, q, 0.0, g.view());
    for (idx i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    return frobenius_norm(g.view());
}

double factorization_residual(ConstMatrixView a, const UTVResult& r) {
    Matrix w(r.t.rows(), r.v.rows());
    gemm(1.0, Trans::N, r.t.view(), Trans::T, r.v.view(), 0.0, w.view());
    Matrix e = to_matrix(a);
    gemm(-1.0, Trans::N, r.u.view(), Trans::N, w.view(), 1.0, e.view());
    return frobenius_norm(e.view());
}

bool same_bits(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if (a.rows() == 0 || a.cols() == 0) return true;
    return std::memcmp(a.data(), b.data(),
                       sizeof(double) * static_cast<std::size_t>(a.rows()) *
                           static_cast<std::size_t>(a.cols())) == 0;
}

// ---------------------------------------------------------------- factorize

struct FactorizeArgs {
    std::string input, out = "utv", algo = "blocked";
    idx b = 0;
    int q = 1;
    int workers = 0;
    std::uint64_t seed = 0;
    bool no_uv = false;
};

int cmd_factorize(const FactorizeArgs& a) {
    const Matrix in = read_matrix(a.input);
    UTVConfig cfg;
    cfg.b = pick_b(a.b, a.algo);
    cfg.q = a.q;
    cfg.seed = a.seed;
    cfg.build_u = cfg.build_v = !a.no_uv;
    const auto t0 = std::chrono::steady_clock::now();
    const UTVResult r = a.algo == "ab" ? randutv_ab(in.view(), cfg, a.workers)
                                       : randutv::randutv(in.view(), cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_rutv(a.out + "_T.rutv", r.t.view());
    std::string written = a.out + "_T.rutv";
    if (!a.no_uv) {
        write_rutv(a.out + "_U.rutv", r.u.view());
        write_rutv(a.out + "_V.rutv", r.v.view());
        written += ", " + a.out + "_U.rutv, " + a.out + "_V.rutv";
    }
    std::printf("factored %lld x %lld (%s, b=%lld, q=%d) in %.3f s; wrote %s\n",
                static_cast<long long>(in.rows()), static_cast<long long>(in.cols()),
                a.algo.c_str(), static_cast<long long>(cfg.b), cfg.q, secs, written.c_str());
    return 0;
}

// -------------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<idx> sizes;
    std::vector<idx> bs{128};
    std::vector<int> qs{1};
    std::vector<int> workers;
    std::string algo = "both";
    int repeats = 3;
    std::uint64_t seed = 0;
    bool no_uv = false;
    std::string csv;
};

int cmd_bench(const BenchArgs& a) {
    BenchPlan plan;
    if (a.algo == "blocked")
        plan.algos = {Algo::Blocked};
    else if (a.algo == "ab")
        plan.algos = {Algo::Ab};
    else
        plan.algos = {Algo::Blocked, Algo::Ab};
    plan.sizes = a.sizes;
    plan.bs = a.bs;
    plan.qs = a.qs;
    plan.workers = a.workers.empty() ? std::vector<int>{default_workers()} : a.workers;
    plan.repeats = a.repeats;
    plan.build_uv = !a.no_uv;
    plan.seed = a.seed;
    const std::vector<BenchRow> rows = run_bench(plan);
    const std::string csv = bench_csv(rows);
    if (a.csv.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(a.csv, std::ios::binary);
        if (!out) throw IoError("cannot open " + a.csv + " for writing");
        out << csv;
        if (!out.flush()) throw IoError("short write to " + a.csv);
        std::printf("wrote %zu rows to %s\n", rows.size(), a.csv.c_str());
    }
    return 0;
}

// ------------------------------------------------------------------- verify

struct Check {
    std::string name;
    bool ok;
    std::string detail;
};

void report(std::vector<Check>& out, const std::string& name, bool ok, std::string detail = "") {
    std::printf("%s %s%s%s\n", ok ? "   ok:" : " FAIL:", name.c_str(),
                detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    out.push_back({name, ok, std::move(detail)});
}

void verify_factorizations(std::vector<Check>& checks, bool full) {
    const idx shapes[][2] = {{48, 48}, {64, 32}, {32, 64}};
    std::uint64_t seed = 100;
    double worst_resid = 0.0, worst_orth = 0.0, worst_spec = 0.0;
    int runs = 0;
    const std::vector<int> qs = full ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 2};
    for (auto [m, n] : shapes)
        for (idx b : {8, 16})
            for (int q : qs) {
                const Matrix a = gaussian_matrix(m, n, seed++);
                const std::vector<double> sig_a = singular_values(a.view());
                const double bound = 100.0 * static_cast<double>(std::max(m, n)) * kEps;
                for (int algo = 0; algo < 2; ++algo) {
                    if (algo == 1 && (m % b != 0 || n % b != 0)) continue;
                    UTVConfig cfg;
                    cfg.b = b;
                    cfg.q = q;
                    cfg.seed = seed;
                    const UTVResult r =
                        algo ? randutv_ab(a.view(), cfg, 1) : randutv::randutv(a.view(), cfg);
                    const double nf = frobenius_norm(a.view());
                    worst_resid =
                        std::max(worst_resid, factorization_residual(a.view(), r) / (bound * nf));
                    worst_orth = std::max({worst_orth, orthogonality_defect(r.u.view()) / bound,
                                           orthogonality_defect(r.v.view()) / bound});
                    const std::vector<double> sig_t = singular_values(r.t.view());
                    for (std::size_t i = 0; i < sig_a.size(); ++i)
                        worst_spec =
                            std::max(worst_spec, std::abs(sig_t[i] - sig_a[i]) / sig_a[0]);
                    ++runs;
                }
            }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d runs, residual %.2g and orthogonality %.2g of budget, spectrum %.2g", runs,
                  worst_resid, worst_orth, worst_spec);
    report(checks, "factorization invariants", worst_resid <= 1.0 && worst_orth <= 1.0 &&
                                                   worst_spec <= 1e-11, buf);
}

void verify_determinism(std::vector<Check>& checks, bool full) {
    const idx n = full ? 192 : 96;
    UTVConfig cfg;
    cfg.b = 32;
    cfg.q = 1;
    const std::vector<int> wlist = full ? std::vector<int>{2, 4, 8} : std::vector<int>{4};
    bool ok = true;
    for (std::uint64_t seed = 0; seed < (full ? 2u : 1u) && ok; ++seed) {
        cfg.seed = seed;
        const Matrix a = gaussian_matrix(n, n, 40 + seed);
        const UTVResult base = randutv_ab(a.view(), cfg, 1);
        for (int w : wlist) {
            const UTVResult r = randutv_ab(a.view(), cfg, w);
            ok = ok && same_bits(base.t, r.t) && same_bits(base.u, r.u) && same_bits(base.v, r.v);
        }
    }
    report(checks, "worker-count determinism", ok,
           std::to_string(n) + "x" + std::to_string(n) + " bitwise stable");
}

void verify_trace(std::vector<Check>& checks) {
    const idx n = 96;
    UTVConfig cfg;
    cfg.b = 32;
    cfg.q = 1;
    const Matrix a = gaussian_matrix(n, n, 5);
    std::vector<TraceEvent> trace;
    (void)randutv_ab_traced(a.view(), cfg, 2, trace);
    const TaskGraph g = build_dag(analyze(a.view(), cfg));
    bool ok = trace.size() == g.size();
    std::vector<const TraceEvent*> by_index(g.size(), nullptr);
    for (const TraceEvent& e : trace)
        if (e.task_index >= 0 && e.task_index < static_cast<int>(g.size()))
            by_index[e.task_index] = &e;
    for (std::size_t u = 0; u < g.size() && ok; ++u) {
        if (!by_index[u]) {
            ok = false;
            break;
        }
        for (int v : g.successors[u]) ok = ok && by_index[u]->end_ns <= by_index[v]->start_ns;
    }
    report(checks, "trace is a linear extension", ok,
           std::to_string(trace.size()) + " tasks");
}

void verify_td_qr(std::vector<Check>& checks, bool full) {
    const int instances = full ? 100 : 20;
    std::uint64_t seed = 900;
    double worst = 0.0;
    const idx bs[] = {2, 4, 8, 16};
    for (int i = 0; i < instances; ++i) {
        const idx b = bs[i % 4];
        const idx l = 1 + static_cast<idx>(i % 24);
        const Matrix rfull = gaussian_matrix(b, b, seed++);
        const Matrix d = gaussian_matrix(l, b, seed++);
        Matrix r(b, b);
        for (idx j = 0; j < b; ++j)
            for (idx ii = 0; ii <= j; ++ii) r(ii, j) = rfull(ii, j);
        const TdQRFactor td = comp_td_qr(r.view(), d.view());
        Matrix stacked(b + l, b);
        copy_into(stacked.view(0, 0, b, b), r.view());
        copy_into(stacked.view(b, 0, l, b), d.view());
        const HouseholderFactor plain = hqr(stacked.view());
        const double scale = frobenius_norm(stacked.view());
        for (idx j = 0; j < b; ++j)
            for (idx ii = 0; ii <= j; ++ii)
                worst = std::max(worst, std::abs(std::abs(td.r(ii, j)) -
                                                 std::abs(plain.qr(ii, j))) / scale);
    }
    report(checks, "updating QR against stacked QR", worst <= 1e-12,
           std::to_string(instances) + " instances, max deviation " + std::to_string(worst));
}

void verify_scheduler_fuzz(std::vector<Check>& checks) {
    std::mt19937_64 rng(777);
    bool ok = true;
    for (int iter = 0; iter < 200 && ok; ++iter) {
        const int nodes = 1 + static_cast<int>(rng() % 120);
        const int pool = 1 + nodes / 3;
        std::vector<Task> tasks;
        for (int t = 0; t < nodes; ++t) {
            Task task;
            task.kind = TaskKind::Copy;
            for (std::uint64_t j = rng() % 3; j > 0; --j)
                task.in.push_back({BlockTag::T, static_cast<std::int32_t>(rng() % pool), 0});
            for (std::uint64_t j = 1 + rng() % 2; j > 0; --j)
                task.inout.push_back({BlockTag::T, static_cast<std::int32_t>(rng() % pool), 0});
            tasks.push_back(std::move(task));
        }
        const TaskGraph g = build_dag(std::move(tasks));
        const std::vector<TraceEvent> trace =
            execute(g, 1 + static_cast<int>(rng() % 4), [](const Task&) {});
        ok = trace.size() == static_cast<std::size_t>(nodes);
        std::vector<const TraceEvent*> by_index(static_cast<std::size_t>(nodes), nullptr);
        for (const TraceEvent& e : trace) by_index[e.task_index] = &e;
        for (int u = 0; u < nodes && ok; ++u)
            for (int v : g.successors[u])
                ok = ok && by_index[u]->end_ns <= by_index[v]->start_ns;
    }
    report(checks, "scheduler fuzz", ok, "200 random graphs");
}

void verify_quality(std::vector<Check>& checks) {
    const Matrix a = geometric_matrix(200, 200, 0.8, 11);
    const std::vector<double> sigma = singular_values(a.view());
    UTVConfig cfg;
    cfg.b = 20;
    cfg.q = 2;
    const UTVResult r = randutv::randutv(a.view(), cfg);
    double worst = 0.0;
    for (idx k : {20, 60, 120, 180})
        worst = std::max(worst, lowrank_error(a.view(), r, k, Norm::Frobenius) /
                                    optimal_error(sigma, k, Norm::Frobenius));
    report(checks, "near-optimal low-rank errors", worst <= 1.5,
           "max error ratio " + std::to_string(worst));
}

void verify_bench_identity(std::vector<Check>& checks) {
    BenchPlan plan;
    plan.sizes = {32};
    plan.bs = {16};
    plan.repeats = 2;
    const std::vector<BenchRow> rows = run_bench(plan);
    bool ok = !rows.empty();
    for (const BenchRow& r : rows) ok = ok && r.scaled == scaled_time(r.seconds, r.n);
    report(checks, "benchmark scaled-time identity", ok,
           std::to_string(rows.size()) + " rows");
}

int cmd_verify(const std::string& level) {
    const bool full = level == "full";
    std::vector<Check> checks;
    verify_factorizations(checks, full);
    verify_determinism(checks, full);
    verify_trace(checks);
    verify_td_qr(checks, full);
    verify_scheduler_fuzz(checks);
    if (full) verify_quality(checks);
    verify_bench_identity(checks);
    const long failed = std::count_if(checks.begin(), checks.end(),
                                      [](const Check& c) { return !c.ok; });
    std::printf("%zu checks, %ld failed\n", checks.size(), failed);
    return failed == 0 ? 0 : 1;
}

// -------------------------------------------------------------------- trace

struct TraceArgs {
    idx n = 0, b = 0;
    int q = 1;
    int workers = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_trace(const TraceArgs& a) {
    UTVConfig cfg;
    cfg.b = pick_b(a.b, "ab");
    cfg.q = a.q;
    cfg.seed = a.seed;
    const Matrix m = gaussian_matrix(a.n, a.n, a.seed);
    std::vector<TraceEvent> trace;
    (void)randutv_ab_traced(m.view(), cfg, a.workers, trace);
    export_trace(trace, a.out);
    std::printf("wrote %zu events to %s (peak concurrency %d with %d workers)\n", trace.size(),
                a.out.c_str(), max_concurrency(trace), a.workers);
    return 0;
}

// ------------------------------------------------------------- layout/mkmat

int cmd_layout(idx m, idx n, idx mb, idx nb, int p, int q) {
    BlockCyclicSpec spec{m, n, mb, nb, p, q};
    std::fputs(ownership_map(spec).c_str(), stdout);
    const DistributionReport rep = distribution_report(spec);
    for (std::size_t i = 0; i < rep.elements_per_process.size(); ++i)
        std::printf("P%zu: %lld elements\n", i,
                    static_cast<long long>(rep.elements_per_process[i]));
    return 0;
}

int cmd_mkmat(const std::string& kind, idx m, idx n, std::uint64_t seed, const std::string& out) {
    const Matrix a = make_test_matrix(kind, m, n, seed);
    write_matrix(out, a.view());
    std::printf("wrote %s %lld x %lld to %s\n", kind.c_str(), static_cast<long long>(m),
                static_cast<long long>(n), out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized rank-revealing UTV factorization toolkit"};
    app.require_subcommand(1);

    FactorizeArgs fa;
    CLI::App* fac = app.add_subcommand("factorize", "factor a matrix file as A = U T V'");
    fac->add_option("input", fa.input, "matrix file (.rutv or .csv)")->required();
    fac->add_option("--out", fa.out, "output prefix for <prefix>_{T,U,V}.rutv");
    fac->add_option("--algo", fa.algo, "driver")
        ->check(CLI::IsMember({"blocked", "ab"}))
        ->capture_default_str();
    fac->add_option("--b", fa.b, "block size (default 128 blocked, 256 ab)");
    fac->add_option("--q", fa.q, "power iteration count")->capture_default_str();
    fac->add_option("--workers", fa.workers, "worker threads for --algo ab");
    fac->add_option("--seed", fa.seed, "random seed")->capture_default_str();
    fac->add_flag("--no-uv", fa.no_uv, "factor without accumulating U and V");

    BenchArgs ba;
    CLI::App* ben = app.add_subcommand("bench", "timed factorization sweep, CSV output");
    ben->add_option("--sizes", ba.sizes, "square sizes n")->required()->delimiter(',');
    ben->add_option("--b", ba.bs, "block sizes")->delimiter(',')->capture_default_str();
    ben->add_option("--q", ba.qs, "power iteration counts")->delimiter(',')
        ->capture_default_str();
    ben->add_option("--workers", ba.workers, "worker counts for the task-parallel driver")
        ->delimiter(',');
    ben->add_option("--algo", ba.algo, "blocked, ab, or both")
        ->check(CLI::IsMember({"blocked", "ab", "both"}))
        ->capture_default_str();
    ben->add_option("--repeats", ba.repeats, "repeats per configuration")->capture_default_str();
    ben->add_option("--seed", ba.seed, "random seed")->capture_default_str();
    ben->add_flag("--no-uv", ba.no_uv, "time factorizations without U and V");
    ben->add_option("--csv", ba.csv, "write rows to this file instead of stdout");

    std::string level = "fast";
    CLI::App* ver = app.add_subcommand("verify", "run the built-in invariant suite");
    ver->add_option("level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    TraceArgs ta;
    CLI::App* tra = app.add_subcommand("trace", "run the task-parallel driver and dump its trace");
    tra->add_option("--n", ta.n, "problem size")->required();
    tra->add_option("--b", ta.b, "block size (default 256)");
    tra->add_option("--q", ta.q, "power iteration count")->capture_default_str();
    tra->add_option("--workers", ta.workers, "worker threads");
    tra->add_option("--seed", ta.seed, "random seed")->capture_default_str();
    tra->add_option("--out", ta.out, "trace CSV path")->required();

    idx lm = 0, ln = 0, lmb = 0, lnb = 0;
    int lp = 0, lq = 0;
    CLI::App* lay = app.add_subcommand("layout", "print a block-cyclic ownership map");
    lay->add_option("m", lm, "matrix rows")->required();
    lay->add_option("n", ln, "matrix cols")->required();
    lay->add_option("mb", lmb, "block rows")->required();
    lay->add_option("nb", lnb, "block cols")->required();
    lay->add_option("p", lp, "process grid rows")->required();
    lay->add_option("q", lq, "process grid cols")->required();

    std::string mk_kind, mk_out;
    idx mk_m = 0, mk_n = 0;
    std::uint64_t mk_seed = 0;
    CLI::App* mk = app.add_subcommand("mkmat", "write a test matrix");
    mk->add_option("kind", mk_kind, "gaussian | identity | geometric:<beta> | rank:<r>")
        ->required();
    mk->add_option("m", mk_m, "rows")->required();
    mk->add_option("n", mk_n, "cols")->required();
    mk->add_option("out", mk_out, "output file (.rutv or .csv)")->required();
    mk->add_option("--seed", mk_seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (fa.workers == 0) fa.workers = default_workers();
    if (ta.workers == 0) ta.workers = default_workers();

    try {
        if (*fac) return cmd_factorize(fa);
        if (*ben) return cmd_bench(ba);
        if (*ver) return cmd_verify(level);
        if (*tra) return cmd_trace(ta);
        if (*lay) return cmd_layout(lm, ln, lmb, lnb, lp, lq);
        if (*mk) return cmd_mkmat(mk_kind, mk_m, mk_n, mk_seed, mk_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
