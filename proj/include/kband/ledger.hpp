#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "kband/common.hpp"

namespace kband {

// Canonical section names used by the pipeline and the reports.
namespace section {
inline constexpr const char* kPart1 = "Part1";
inline constexpr const char* kPart2 = "Part2";
inline constexpr const char* kPart3 = "Part3";
inline constexpr const char* kPart4 = "Part4";
inline constexpr const char* kPart5 = "Part5";
inline constexpr const char* kPart6 = "Part6";
inline constexpr const char* kHouseholder = "householder";
inline constexpr const char* kTridSolve = "trid_solve";
inline constexpr const char* kRearrange = "rearrange";
inline constexpr const char* kNormalize = "normalize";
// per-procedure detail inside the Householder step
inline constexpr const char* kProc[6] = {"householder.p1", "householder.p2", "householder.p3",
                                         "householder.p4", "householder.p5", "householder.p6"};
}  // namespace section

struct LedgerSection {
    double wall = 0.0;     // measured seconds
    double modeled = 0.0;  // cost-model seconds
    double calls = 0.0;
    double flops = 0.0;
    double bytes = 0.0;
    double xfer_bytes = 0.0;   // host<->device traffic if offloaded
    double xfer_events = 0.0;  // discrete transfer/launch events

    LedgerSection& operator+=(const LedgerSection& o);
};

/// Named timing/work sections for one run (or one rank, merged later).
class TimingLedger {
public:
    LedgerSection& at(const std::string& name) { return sections_[name]; }
    const std::map<std::string, LedgerSection>& sections() const { return sections_; }
    bool has(const std::string& name) const { return sections_.count(name) != 0; }

    void add_wall(const std::string& name, double seconds);
    void add_work(const std::string& name, double flops, double bytes, double xfer_bytes = 0.0,
                  double xfer_events = 0.0);
    void add_call(const std::string& name, double count = 1.0);

    void merge(const TimingLedger& other);

    /// Percentage shares of `names` by the chosen field (wall or modeled).
    /// Sums to 100 within rounding when the total is positive.
    std::vector<std::pair<std::string, double>> shares(const std::vector<std::string>& names,
                                                       bool modeled) const;

    double total(const std::vector<std::string>& names, bool modeled) const;

private:
    std::map<std::string, LedgerSection> sections_;
};

/// Accumulates elapsed wall time into a ledger section on destruction.
class ScopedWall {
public:
    ScopedWall(TimingLedger* ledger, std::string name)
        : ledger_(ledger), name_(std::move(name)), t0_(std::chrono::steady_clock::now()) {}
    ~ScopedWall() {
        if (!ledger_) return;
        const auto dt = std::chrono::steady_clock::now() - t0_;
        ledger_->add_wall(name_, std::chrono::duration<double>(dt).count());
        ledger_->add_call(name_);
    }
    ScopedWall(const ScopedWall&) = delete;
    ScopedWall& operator=(const ScopedWall&) = delete;

private:
    TimingLedger* ledger_;
    std::string name_;
    std::chrono::steady_clock::time_point t0_;
};

inline const std::vector<std::string>& pipeline_part_names() {
    static const std::vector<std::string> names = {section::kPart1, section::kPart2, section::kPart3,
                                                   section::kPart4, section::kPart5, section::kPart6};
    return names;
}

inline const std::vector<std::string>& eigen_step_names() {
    static const std::vector<std::string> names = {section::kHouseholder, section::kTridSolve,
                                                   section::kRearrange, section::kNormalize};
    return names;
}

}  // namespace kband
