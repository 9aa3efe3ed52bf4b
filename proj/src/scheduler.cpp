#include "randutv/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "randutv/errors.hpp"

namespace randutv {

TaskGraph build_dag(std::vector<Task> tasks) {
    TaskGraph g;
    g.tasks = std::move(tasks);
    const int n = static_cast<int>(g.tasks.size());
    g.successors.assign(static_cast<std::size_t>(n), {});
    g.npred.assign(static_cast<std::size_t>(n), 0);

    std::map<BlockId, int> last_writer;
    std::map<BlockId, std::vector<int>> readers;  // since the last write

    for (int v = 0; v < n; ++v) {
        const Task& t = g.tasks[static_cast<std::size_t>(v)];
        for (const BlockId& id : t.in) {
            auto w = last_writer.find(id);
            if (w != last_writer.end()) g.successors[static_cast<std::size_t>(w->second)].push_back(v);
            readers[id].push_back(v);
        }
        for (const BlockId& id : t.inout) {
            // a task naming the same block twice is still one access: without
            // the w->second != v guard the second mention would record v as
            // its own predecessor, and a task with a self edge never starts
            auto w = last_writer.find(id);
            if (w != last_writer.end() && w->second != v)
                g.successors[static_cast<std::size_t>(w->second)].push_back(v);
            for (int r : readers[id])
                if (r != v) g.successors[static_cast<std::size_t>(r)].push_back(v);
            readers[id].clear();
            last_writer[id] = v;
        }
    }
    for (int u = 0; u < n; ++u) {
        auto& s = g.successors[static_cast<std::size_t>(u)];
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int v : s) ++g.npred[static_cast<std::size_t>(v)];
    }
    return g;
}

std::vector<TraceEvent> execute(const TaskGraph& g, int workers,
                                const std::function<void(const Task&)>& kernel) {
    if (workers < 1)
        throw ConfigError("worker count must be >= 1, got " + std::to_string(workers));
    const int n = static_cast<int>(g.size());
    std::vector<TraceEvent> events(static_cast<std::size_t>(n));
    if (n == 0) return events;

    std::vector<int> pending = g.npred;
    std::set<int> ready;
    for (int i = 0; i < n; ++i)
        if (pending[static_cast<std::size_t>(i)] == 0) ready.insert(i);

    std::mutex mu;
    std::condition_variable cv;
    int done = 0;
    bool failed = false;
    int failed_task = -1;
    std::string failed_what;

    const auto t0 = std::chrono::steady_clock::now();
    auto now_ns = [&t0]() {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    auto work = [&](int id) {
        std::unique_lock<std::mutex> lk(mu);
        while (true) {
            cv.wait(lk, [&] { return failed || done == n || !ready.empty(); });
            if (failed || done == n) return;
            const int t = *ready.begin();
            ready.erase(ready.begin());
            lk.unlock();

            const std::int64_t s = now_ns();
            try {
                kernel(g.tasks[static_cast<std::size_t>(t)]);
            } catch (const std::exception& e) {
                lk.lock();
                if (!failed) {
                    failed = true;
                    failed_task = t;
                    failed_what = e.what();
                }
                cv.notify_all();
                return;
            }
            const std::int64_t e = now_ns();

            lk.lock();
            events[static_cast<std::size_t>(t)] =
                TraceEvent{t, g.tasks[static_cast<std::size_t>(t)].kind, id, s, e};
            ++done;
            for (int v : g.successors[static_cast<std::size_t>(t)])
                if (--pending[static_cast<std::size_t>(v)] == 0) ready.insert(v);
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();

    if (failed)
        throw TaskError("task " + std::to_string(failed_task) + " (" +
                            task_kind_name(g.tasks[static_cast<std::size_t>(failed_task)].kind) +
                            ") failed: " + failed_what,
                        failed_task);
    return events;
}

void replay(const TaskGraph& g, const std::vector<int>& order,
            const std::function<void(const Task&)>& kernel) {
    const int n = static_cast<int>(g.size());
    if (static_cast<int>(order.size()) != n)
        throw TaskError("replay order has " + std::to_string(order.size()) + " entries for " +
                            std::to_string(n) + " tasks",
                        -1);
    std::vector<int> pos(static_cast<std::size_t>(n), -1);
    for (int p = 0; p < n; ++p) {
        const int t = order[static_cast<std::size_t>(p)];
        if (t < 0 || t >= n)
            throw TaskError("replay order names unknown task " + std::to_string(t), t);
        if (pos[static_cast<std::size_t>(t)] != -1)
            throw TaskError("replay order repeats task " + std::to_string(t), t);
        pos[static_cast<std::size_t>(t)] = p;
    }
    for (int u = 0; u < n; ++u)
        for (int v : g.successors[static_cast<std::size_t>(u)])
            if (pos[static_cast<std::size_t>(u)] >= pos[static_cast<std::size_t>(v)])
                throw TaskError("replay order runs task " + std::to_string(v) +
                                    " before its dependency " + std::to_string(u),
                                v);
    for (int t : order) kernel(g.tasks[static_cast<std::size_t>(t)]);
}

void export_trace(const std::vector<TraceEvent>& events, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    for (const TraceEvent& e : events)
        os << e.task_index << "," << task_kind_name(e.kind) << "," << e.worker << "," << e.start_ns
           << "," << e.end_ns << "\n";
    if (!os) throw IoError("write failed for " + path);
}

int max_concurrency(const std::vector<TraceEvent>& events) {
    std::vector<std::pair<std::int64_t, int>> marks;
    marks.reserve(events.size() * 2);
    for (const TraceEvent& e : events) {
        marks.emplace_back(e.start_ns, +1);
        marks.emplace_back(e.end_ns, -1);
    }
    std::sort(marks.begin(), marks.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first < y.first : x.second < y.second;  // close before open
    });
    int cur = 0, best = 0;
    for (const auto& [at, delta] : marks) {
        cur += delta;
        best = std::max(best, cur);
    }
    return best;
}

}  // namespace randutv
