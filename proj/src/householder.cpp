#include "kband/householder.hpp"

#include <cmath>
#include <sstream>

namespace kband {

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::HostSerial: return "host_serial";
        case Backend::HostThreaded: return "host_threaded";
        case Backend::DeviceOffload: return "device_offload";
    }
    return "?";
}

ProcedurePlan ProcedurePlan::device_default() {
    ProcedurePlan p;
    p.procedure = {Backend::DeviceOffload, Backend::HostThreaded, Backend::HostSerial,
                   Backend::DeviceOffload, Backend::DeviceOffload, Backend::DeviceOffload};
    p.rearrange = Backend::DeviceOffload;
    p.normalize = Backend::DeviceOffload;
    return p;
}

ProcedurePlan ProcedurePlan::host_serial() { return ProcedurePlan{}; }

ProcedurePlan ProcedurePlan::host_threaded() {
    ProcedurePlan p;
    p.procedure = {Backend::HostThreaded, Backend::HostThreaded, Backend::HostSerial,
                   Backend::HostThreaded, Backend::HostThreaded, Backend::HostThreaded};
    p.rearrange = Backend::HostThreaded;
    p.normalize = Backend::HostThreaded;
    return p;
}

bool ProcedurePlan::uses_device() const {
    for (Backend b : procedure)
        if (b == Backend::DeviceOffload) return true;
    return rearrange == Backend::DeviceOffload || normalize == Backend::DeviceOffload;
}

namespace {

constexpr double kSkipNorm = 1e-300;  // below this the stage records an identity reflector

inline bool on_device(Backend b) { return b == Backend::DeviceOffload; }
inline bool threaded(Backend b) { return b != Backend::HostSerial; }

// Charges a host<->device vector move to a section when producer and consumer
// sit on different sides. Accounting only; the arithmetic never moves.
inline void charge_move(TimingLedger* ledger, const char* sec, bool from_dev, bool to_dev,
                        double bytes) {
    if (!ledger || from_dev == to_dev) return;
    ledger->add_work(sec, 0.0, 0.0, bytes, 1.0);
}

}  // namespace

TridiagReal tridiagonalize(const HermitianMatrix& a, const ProcedurePlan& plan, ThreadTeam* team,
                           TimingLedger* ledger) {
    ScopedWall wall(ledger, section::kHouseholder);
    const std::size_t n = a.dim();
    if (n == 0) throw DimensionError("tridiagonalize: empty matrix");

    DenseMatrix b = a.dense();
    TridiagReal out;
    out.d.resize(n);
    if (n >= 2) {
        out.e.resize(n - 1);
        out.records.reserve(n - 1);
    }

    const bool matrix_on_device = on_device(plan.proc(6));
    if (ledger && plan.uses_device()) {
        // initial upload of the working matrix, resident across procedures
        ledger->add_work(section::kHouseholder, 0.0, 0.0,
                         16.0 * static_cast<double>(n) * n, 1.0);
    }

    ComplexVector u(n), p(n), q(n);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        out.d[i] = b(i, i).real();
        const std::size_t lo = i + 1;
        const std::size_t t = n - lo;
        const double td = static_cast<double>(t);

        // procedure 1: u <- column tail of B
        {
            ScopedWall w(ledger, section::kProc[0]);
            for (std::size_t r = lo; r < n; ++r) u[r] = b(r, i);
            if (ledger) ledger->add_work(section::kProc[0], 0.0, 32.0 * td);
            charge_move(ledger, section::kProc[0], matrix_on_device, on_device(plan.proc(1)),
                        16.0 * td);
        }

        // procedure 2: s = |u|, subtract the signed norm from the pivot entry
        double s, h;
        Complex pivot_phase;
        {
            ScopedWall w(ledger, section::kProc[1]);
            charge_move(ledger, section::kProc[1], on_device(plan.proc(1)),
                        on_device(plan.proc(2)), 16.0 * td);
            double s2 = 0.0;  // fixed-order reduction
            for (std::size_t r = lo; r < n; ++r) s2 += std::norm(u[r]);
            s = std::sqrt(s2);
            const double piv = std::abs(u[lo]);
            pivot_phase = piv > 0.0 ? u[lo] / piv : Complex(1.0, 0.0);
            if (s >= kSkipNorm) {
                // sign opposite the pivot: u0 += phase*s avoids cancellation
                u[lo] += pivot_phase * s;
                h = s * (s + piv);
            } else {
                h = 0.0;
            }
            if (ledger) ledger->add_work(section::kProc[1], 4.0 * td + 8.0, 16.0 * td);
        }
        if (!std::isfinite(s) || !std::isfinite(h)) {
            std::ostringstream os;
            os << "tridiagonalize: non-finite reflector at stage " << i;
            throw ConvergenceError(os.str());
        }

        HouseholderRecord rec;
        rec.stage = i;
        rec.s = s;
        rec.h = h;

        if (h == 0.0) {
            // degenerate tail: identity reflector, off-diagonal zero
            out.e[i] = 0.0;
            {
                ScopedWall w(ledger, section::kProc[2]);
                if (ledger) ledger->add_work(section::kProc[2], 0.0, 64.0);
            }
            out.records.push_back(std::move(rec));
            continue;
        }

        const Complex ec = -pivot_phase * s;  // complex subdiagonal before phase chase
        out.e[i] = s;
        rec.phase = -pivot_phase;

        // procedure 3: store the stage record for the eigenvector rearrangement
        {
            ScopedWall w(ledger, section::kProc[2]);
            rec.u.assign(n, Complex(0.0, 0.0));
            for (std::size_t r = lo; r < n; ++r) rec.u[r] = u[r];
            if (ledger) ledger->add_work(section::kProc[2], 0.0, 16.0 * td + 64.0);
        }

        // procedure 4: p = B*u/h over the active block, then the dot product
        double k_dot;
        {
            ScopedWall w(ledger, section::kProc[3]);
            charge_move(ledger, section::kProc[3], on_device(plan.proc(2)),
                        on_device(plan.proc(4)), 16.0 * td);
            auto rows = [&](std::size_t r0, std::size_t r1) {
                for (std::size_t r = lo + r0; r < lo + r1; ++r) {
                    const double* br = reinterpret_cast<const double*>(b.row(r));
                    double accr = 0.0, acci = 0.0;
                    for (std::size_t c = lo; c < n; ++c) {
                        const double xr = br[2 * c], xi = br[2 * c + 1];
                        const double ur = u[c].real(), ui = u[c].imag();
                        accr += xr * ur - xi * ui;
                        acci += xr * ui + xi * ur;
                    }
                    p[r] = Complex(accr / h, acci / h);
                }
            };
            if (team && threaded(plan.proc(4)))
                team->parallel_for(t, rows);
            else
                rows(0, t);
            if (ledger)
                ledger->add_work(section::kProc[3], 8.0 * td * td + 2.0 * td,
                                 16.0 * td * td + 32.0 * td);

            // reduction: fixed order, host side by default
            charge_move(ledger, section::kProc[3], on_device(plan.proc(4)), !plan.reduce_on_host,
                        16.0 * td);
            double dr = 0.0;
            for (std::size_t r = lo; r < n; ++r)
                dr += p[r].real() * u[r].real() + p[r].imag() * u[r].imag();
            k_dot = dr / (2.0 * h);
            if (ledger) ledger->add_work(section::kProc[3], 4.0 * td + 2.0, 32.0 * td);
        }

        // procedure 5: q = p - K*u
        {
            ScopedWall w(ledger, section::kProc[4]);
            charge_move(ledger, section::kProc[4], !plan.reduce_on_host, on_device(plan.proc(5)),
                        8.0);
            auto body = [&](std::size_t r0, std::size_t r1) {
                for (std::size_t r = lo + r0; r < lo + r1; ++r) q[r] = p[r] - k_dot * u[r];
            };
            if (team && threaded(plan.proc(5)))
                team->parallel_for(t, body);
            else
                body(0, t);
            if (ledger) ledger->add_work(section::kProc[4], 4.0 * td, 48.0 * td);
        }

        // procedure 6: B -= u q^H + q u^H on the active block
        {
            ScopedWall w(ledger, section::kProc[5]);
            charge_move(ledger, section::kProc[5], on_device(plan.proc(5)),
                        on_device(plan.proc(6)), 16.0 * td);
            const double sign = plan.fault_proc6_sign ? 1.0 : -1.0;
            auto body = [&](std::size_t r0, std::size_t r1) {
                for (std::size_t r = lo + r0; r < lo + r1; ++r) {
                    const double ur = u[r].real(), ui = u[r].imag();
                    const double qr = q[r].real(), qi = q[r].imag();
                    double* br = reinterpret_cast<double*>(b.row(r));
                    for (std::size_t c = lo; c < n; ++c) {
                        // u[r]*conj(q[c]) + q[r]*conj(u[c])
                        const double qcr = q[c].real(), qci = q[c].imag();
                        const double ucr = u[c].real(), uci = u[c].imag();
                        const double xr = ur * qcr + ui * qci + qr * ucr + qi * uci;
                        const double xi = ui * qcr - ur * qci + qi * ucr - qr * uci;
                        br[2 * c] += sign * xr;
                        br[2 * c + 1] += sign * xi;
                    }
                }
            };
            if (team && threaded(plan.proc(6)))
                team->parallel_for(t, body);
            else
                body(0, t);
            if (ledger) ledger->add_work(section::kProc[5], 16.0 * td * td, 32.0 * td * td);
        }

        // fix the eliminated column/row and keep the diagonal exactly real
        b(lo, i) = ec;
        b(i, lo) = std::conj(ec);
        for (std::size_t r = lo + 1; r < n; ++r) {
            b(r, i) = Complex(0.0, 0.0);
            b(i, r) = Complex(0.0, 0.0);
        }
        if (!std::isfinite(b(lo, lo).real())) {
            std::ostringstream os;
            os << "tridiagonalize: non-finite update at stage " << i;
            throw ConvergenceError(os.str());
        }

        out.records.push_back(std::move(rec));
    }
    out.d[n - 1] = b(n - 1, n - 1).real();
    return out;
}

DenseMatrix back_transform(const std::vector<HouseholderRecord>& records, const DenseMatrix& y,
                           ThreadTeam* team, TimingLedger* ledger) {
    ScopedWall wall(ledger, section::kRearrange);
    const std::size_t n = y.rows();
    const std::size_t m = y.cols();
    for (const auto& rec : records) {
        if (rec.stage + 1 > n || (!rec.u.empty() && rec.u.size() != n))
            throw DimensionError("back_transform: record does not match matrix dimension");
    }

    DenseMatrix w = y;

    // chased-out subdiagonal phases: row j scales by prod of phases below j
    {
        Complex dphase(1.0, 0.0);
        std::size_t row = 1;
        for (const auto& rec : records) {
            if (row >= n) break;
            dphase *= (rec.h > 0.0) ? rec.phase : Complex(1.0, 0.0);
            for (std::size_t j = 0; j < m; ++j) w(row, j) *= dphase;
            ++row;
        }
    }

    double flops = 0.0, bytes = 0.0, xfer_events = 0.0;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        const HouseholderRecord& rec = *it;
        if (rec.h == 0.0) continue;
        const std::size_t lo = rec.stage + 1;
        const double td = static_cast<double>(n - lo);
        auto cols = [&](std::size_t c0, std::size_t c1) {
            for (std::size_t j = c0; j < c1; ++j) {
                Complex acc(0.0, 0.0);  // u^H * column, fixed order
                for (std::size_t r = lo; r < n; ++r) acc += std::conj(rec.u[r]) * w(r, j);
                acc /= rec.h;
                for (std::size_t r = lo; r < n; ++r) w(r, j) -= rec.u[r] * acc;
            }
        };
        if (team) team->parallel_for(m, cols);
        else cols(0, m);
        flops += 16.0 * td * static_cast<double>(m);
        bytes += 48.0 * td * static_cast<double>(m);
        xfer_events += 1.0;
    }
    if (ledger) {
        // matrix up + result down when the step is offloaded
        ledger->add_work(section::kRearrange, flops, bytes, 32.0 * static_cast<double>(n) * m,
                         xfer_events + 2.0);
    }
    return w;
}

DenseMatrix normalize_columns(const DenseMatrix& c, ThreadTeam* team, TimingLedger* ledger) {
    ScopedWall wall(ledger, section::kNormalize);
    DenseMatrix out = c;
    const std::size_t n = c.rows(), m = c.cols();
    RealVector norms(m);
    for (std::size_t j = 0; j < m; ++j) {
        norms[j] = column_norm(c, j);
        if (norms[j] < kSkipNorm) {
            std::ostringstream os;
            os << "normalize_columns: zero column " << j;
            throw Error(os.str());
        }
    }
    auto body = [&](std::size_t c0, std::size_t c1) {
        for (std::size_t j = c0; j < c1; ++j) {
            const double inv = 1.0 / norms[j];
            for (std::size_t r = 0; r < n; ++r) out(r, j) *= inv;
        }
    };
    if (team) team->parallel_for(m, body);
    else body(0, m);
    if (ledger)
        ledger->add_work(section::kNormalize, 6.0 * static_cast<double>(n) * m,
                         48.0 * static_cast<double>(n) * m, 0.0, 1.0);
    return out;
}

EigenResult eigen_hh(const HermitianMatrix& a, bool want_vectors, const ProcedurePlan& plan,
                     ThreadTeam* team, TimingLedger* ledger) {
    const TridiagReal trid = tridiagonalize(a, plan, team, ledger);

    TridiagEigenResult tr;
    {
        ScopedWall w(ledger, section::kTridSolve);
        WorkTally tally;
        tr = solve_tridiag(trid.problem(), want_vectors, &tally);
        if (ledger) ledger->add_work(section::kTridSolve, tally.flops, tally.bytes);
    }

    EigenResult out;
    out.eigenvalues = std::move(tr.eigenvalues);
    if (want_vectors) {
        const DenseMatrix y = back_transform(trid.records, *tr.eigenvectors, team, ledger);
        out.eigenvectors = normalize_columns(y, team, ledger);
    }
    return out;
}

}  // namespace kband
