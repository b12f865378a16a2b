#pragma once

#include <array>

#include "kband/ledger.hpp"
#include "kband/linalg.hpp"
#include "kband/tridiag.hpp"

namespace kband {

/// Where a Householder procedure runs. Device offload executes the same host
/// arithmetic (the device is a cost-model construct); the tag only changes
/// time accounting and threading of independent loops.
enum class Backend { HostSerial, HostThreaded, DeviceOffload };

const char* backend_name(Backend b);

/// Per-procedure backend assignment for the eigensolver.
struct ProcedurePlan {
    std::array<Backend, 6> procedure{Backend::HostSerial, Backend::HostSerial, Backend::HostSerial,
                                     Backend::HostSerial, Backend::HostSerial, Backend::HostSerial};
    Backend rearrange = Backend::HostSerial;
    Backend normalize = Backend::HostSerial;
    // procedure 4 splits: multiply on the tagged backend, the dot-product
    // addition stays on the host
    bool reduce_on_host = true;
    // test hook: flips a sign in the procedure-6 rank-2 update
    bool fault_proc6_sign = false;

    Backend proc(int i) const { return procedure[static_cast<std::size_t>(i - 1)]; }

    /// Device on procedures 1, 4 (multiply), 5, 6 and on the eigenvector
    /// steps; threads on procedure 2; procedure 3 stays serial.
    static ProcedurePlan device_default();
    static ProcedurePlan host_serial();
    /// Threads on every single-loop procedure (1, 2, 4, 5, 6); 3 stays serial.
    static ProcedurePlan host_threaded();

    bool uses_device() const;
};

/// One elimination stage: reflector and the scalars needed to reapply it.
struct HouseholderRecord {
    std::size_t stage = 0;    // column index eliminated
    ComplexVector u;          // full length n, zero above stage+1; empty if skipped
    double h = 0.0;           // s*(s + |pivot|) = |u|^2 / 2; 0 marks a skipped stage
    double s = 0.0;           // original column tail norm
    Complex phase{1.0, 0.0};  // complex subdiagonal was phase * s
};

/// Real symmetric tridiagonal image of a Hermitian matrix plus the
/// transformation record (reflectors and chased-out off-diagonal phases).
struct TridiagReal {
    RealVector d;
    RealVector e;
    std::vector<HouseholderRecord> records;

    std::size_t dim() const { return d.size(); }
    TridiagProblem problem() const { return TridiagProblem{d, e}; }
};

/// Householder tridiagonalization (procedures 1-6 per stage).
TridiagReal tridiagonalize(const HermitianMatrix& a, const ProcedurePlan& plan,
                           ThreadTeam* team = nullptr, TimingLedger* ledger = nullptr);

/// Applies the recorded transformation to tridiagonal-basis eigenvectors:
/// returns Q*Y where Q^H A Q = T.
DenseMatrix back_transform(const std::vector<HouseholderRecord>& records, const DenseMatrix& y,
                           ThreadTeam* team = nullptr, TimingLedger* ledger = nullptr);

/// Scales every column to unit 2-norm. Zero column is an error.
DenseMatrix normalize_columns(const DenseMatrix& c, ThreadTeam* team = nullptr,
                              TimingLedger* ledger = nullptr);

/// Full Hermitian eigensolver: tridiagonalize, tridiagonal solve,
/// rearrangement of eigenvectors, normalization. The last two steps run only
/// when eigenvectors are requested.
EigenResult eigen_hh(const HermitianMatrix& a, bool want_vectors,
                     const ProcedurePlan& plan = ProcedurePlan::host_serial(),
                     ThreadTeam* team = nullptr, TimingLedger* ledger = nullptr);

}  // namespace kband
