#pragma once

#include <complex>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kband {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

// Error taxonomy. The CLI maps ConfigError to a distinct exit code; everything
// else counts as an invariant/numeric failure.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct ConvergenceError : Error {
    using Error::Error;
};
struct ConsistencyError : Error {
    using Error::Error;
};
struct InfeasibleError : Error {
    using Error::Error;
};

// Flop/byte accounting attached to the numeric operations. Counts are real
// floating-point operations (one complex multiply = 6, one complex add = 2)
// and bytes of data streamed through memory.
struct WorkTally {
    double flops = 0.0;
    double bytes = 0.0;

    void add(double f, double b) {
        flops += f;
        bytes += b;
    }
    WorkTally& operator+=(const WorkTally& o) {
        flops += o.flops;
        bytes += o.bytes;
        return *this;
    }
};

/// Persistent thread team for intra-rank parallelism.
///
/// parallel_for splits [0, n) into one contiguous chunk per thread with a
/// fixed chunking rule, so every index is computed by exactly one thread and
/// results are bitwise independent of the team size. Reductions must NOT go
/// through this; they stay serial in caller code to keep summation order
/// fixed.
class ThreadTeam {
public:
    explicit ThreadTeam(int threads);
    ~ThreadTeam();

    ThreadTeam(const ThreadTeam&) = delete;
    ThreadTeam& operator=(const ThreadTeam&) = delete;

    int size() const { return size_; }

    /// Runs fn(begin, end) on disjoint contiguous chunks covering [0, n).
    void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

    /// Global cap applied on top of requested team sizes (KBAND_THREADS).
    static int thread_cap();

private:
    void worker_loop(int slot);

    int size_ = 1;
    std::vector<std::thread> threads_;
    std::mutex mtx_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
    std::size_t job_n_ = 0;
    long generation_ = 0;
    int pending_ = 0;
    bool stop_ = false;
};

// Below this extent parallel_for runs inline; the split produces identical
// results either way, this is purely a dispatch-overhead cutoff.
inline constexpr std::size_t kParallelCutoff = 2048;

}  // namespace kband
