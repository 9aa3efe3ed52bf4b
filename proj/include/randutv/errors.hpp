#pragma once

#include <stdexcept>
#include <string>

namespace randutv {

/// Base class for everything this library throws on its own behalf.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch between operands (gemm shapes, factor vs. target, ...).
struct ShapeError : Error {
    using Error::Error;
};

/// Out-of-range element, block, or view coordinates.
struct IndexError : Error {
    using Error::Error;
};

/// Invalid algorithm configuration (b < 1, divisibility violations, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Iterative kernel failed to meet its convergence criterion.
/// `residual` is the criterion value at the point of giving up.
struct ConvergenceError : Error {
    double residual;
    ConvergenceError(const std::string& msg, double r) : Error(msg), residual(r) {}
};

/// File or stream I/O failure, including malformed on-disk data.
struct IoError : Error {
    using Error::Error;
};

/// A task kernel failed during dependency-driven execution.
/// `task_index` is the emission index of the failing task.
struct TaskError : Error {
    long long task_index;
    TaskError(const std::string& msg, long long idx) : Error(msg), task_index(idx) {}
};

/// Command-line usage problem (unknown flag, missing argument, bad value).
struct UsageError : Error {
    using Error::Error;
};

}  // namespace randutv
