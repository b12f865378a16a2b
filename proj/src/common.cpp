#include "kband/common.hpp"

#include <algorithm>
#include <cstdlib>

#include "kband/ledger.hpp"

namespace kband {

int ThreadTeam::thread_cap() {
    static const int cap = [] {
        if (const char* s = std::getenv("KBAND_THREADS")) {
            const int v = std::atoi(s);
            if (v >= 1) return v;
        }
        return 1 << 20;
    }();
    return cap;
}

ThreadTeam::ThreadTeam(int threads) {
    size_ = std::max(1, std::min(threads, thread_cap()));
    const int extra = size_ - 1;
    threads_.reserve(static_cast<std::size_t>(extra));
    for (int i = 0; i < extra; ++i) {
        threads_.emplace_back([this, i] { worker_loop(i + 1); });
    }
}

ThreadTeam::~ThreadTeam() {
    {
        std::lock_guard<std::mutex> lk(mtx_);
        stop_ = true;
    }
    cv_start_.notify_all();
    for (auto& t : threads_) t.join();
}

namespace {

// Fixed chunking: ceil(n / team) sized contiguous blocks, slot k gets block k.
inline std::pair<std::size_t, std::size_t> chunk_of(std::size_t n, int team, int slot) {
    const std::size_t chunk = (n + static_cast<std::size_t>(team) - 1) / static_cast<std::size_t>(team);
    const std::size_t b = std::min(n, chunk * static_cast<std::size_t>(slot));
    const std::size_t e = std::min(n, b + chunk);
    return {b, e};
}

}  // namespace

void ThreadTeam::worker_loop(int slot) {
    long seen = 0;
    for (;;) {
        const std::function<void(std::size_t, std::size_t)>* job = nullptr;
        std::size_t n = 0;
        {
            std::unique_lock<std::mutex> lk(mtx_);
            cv_start_.wait(lk, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            job = job_;
            n = job_n_;
        }
        auto [b, e] = chunk_of(n, size_, slot);
        if (b < e) (*job)(b, e);
        {
            std::lock_guard<std::mutex> lk(mtx_);
            if (--pending_ == 0) cv_done_.notify_one();
        }
    }
}

void ThreadTeam::parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (size_ == 1 || n < kParallelCutoff) {
        fn(0, n);
        return;
    }
    {
        std::lock_guard<std::mutex> lk(mtx_);
        job_ = &fn;
        job_n_ = n;
        pending_ = size_ - 1;
        ++generation_;
    }
    cv_start_.notify_all();
    auto [b, e] = chunk_of(n, size_, 0);
    if (b < e) fn(b, e);
    {
        std::unique_lock<std::mutex> lk(mtx_);
        cv_done_.wait(lk, [&] { return pending_ == 0; });
        job_ = nullptr;
    }
}

LedgerSection& LedgerSection::operator+=(const LedgerSection& o) {
    wall += o.wall;
    modeled += o.modeled;
    calls += o.calls;
    flops += o.flops;
    bytes += o.bytes;
    xfer_bytes += o.xfer_bytes;
    xfer_events += o.xfer_events;
    return *this;
}

void TimingLedger::add_wall(const std::string& name, double seconds) {
    sections_[name].wall += seconds;
}

void TimingLedger::add_work(const std::string& name, double flops, double bytes, double xfer_bytes,
                            double xfer_events) {
    LedgerSection& s = sections_[name];
    s.flops += flops;
    s.bytes += bytes;
    s.xfer_bytes += xfer_bytes;
    s.xfer_events += xfer_events;
}

void TimingLedger::add_call(const std::string& name, double count) {
    sections_[name].calls += count;
}

void TimingLedger::merge(const TimingLedger& other) {
    for (const auto& [name, sec] : other.sections_) sections_[name] += sec;
}

double TimingLedger::total(const std::vector<std::string>& names, bool modeled) const {
    double t = 0.0;
    for (const auto& n : names) {
        auto it = sections_.find(n);
        if (it != sections_.end()) t += modeled ? it->second.modeled : it->second.wall;
    }
    return t;
}

std::vector<std::pair<std::string, double>> TimingLedger::shares(
    const std::vector<std::string>& names, bool modeled) const {
    std::vector<std::pair<std::string, double>> out;
    const double tot = total(names, modeled);
    for (const auto& n : names) {
        double v = 0.0;
        auto it = sections_.find(n);
        if (it != sections_.end()) v = modeled ? it->second.modeled : it->second.wall;
        out.emplace_back(n, tot > 0.0 ? 100.0 * v / tot : 0.0);
    }
    return out;
}

}  // namespace kband
