#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "randutv/tasks.hpp"

namespace randutv {

/// Dependency DAG over a task list.  Edges always point from a lower to a
/// higher emission index, so the emission order itself is a valid schedule
/// and the graph can never deadlock.
struct TaskGraph {
    std::vector<Task> tasks;                    // emission order
    std::vector<std::vector<int>> successors;   // successors[u]: sorted, deduplicated
    std::vector<int> npred;                     // predecessor counts

    std::size_t size() const { return tasks.size(); }
};

/// Conservative dependence analysis in emission order: a later task depends
/// on an earlier one when they touch a common block id and at least one of
/// the touches is a write (inout).  Reads between two writes depend on the
/// first write and are awaited by the second (flow, output, and anti
/// dependences); independent readers share nothing.  Rebuilding from the same
/// task list gives the identical edge set.
TaskGraph build_dag(std::vector<Task> tasks);

struct TraceEvent {
    int task_index = -1;
    TaskKind kind = TaskKind::Copy;
    int worker = -1;
    std::int64_t start_ns = 0;  // offsets from dispatch start, steady clock
    std::int64_t end_ns = 0;
};

/// Runs the graph on `workers` threads.  Each worker claims the ready task
/// with the lowest emission index, so one worker executes exactly the
/// emission order and any worker count executes some linear extension of the
/// DAG.  Every task runs exactly once.  If the kernel throws, dispatch stops
/// claiming new tasks and the failure surfaces as a TaskError carrying the
/// task's emission index.  Returns one trace event per executed task, ordered
/// by task index.
std::vector<TraceEvent> execute(const TaskGraph& g, int workers,
                                const std::function<void(const Task&)>& kernel);

/// Re-executes a recorded order single-threaded, first validating that it is
/// a permutation of all tasks consistent with every edge (a linear extension
/// of the DAG).  Violations throw TaskError naming the offending task.
void replay(const TaskGraph& g, const std::vector<int>& order,
            const std::function<void(const Task&)>& kernel);

/// CSV lines "task_index,kind,worker,start_ns,end_ns", one per event.
void export_trace(const std::vector<TraceEvent>& events, const std::string& path);

/// Largest number of tasks whose [start, end) spans overlap at one instant.
int max_concurrency(const std::vector<TraceEvent>& events);

}  // namespace randutv
