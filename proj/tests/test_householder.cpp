#include <doctest.h>

#include <cmath>

#include "kband/householder.hpp"
#include "test_support.hpp"

using namespace kband;
using namespace kband::test;

namespace {

RealVector sorted_tridiag_spectrum(const TridiagReal& t) {
    return solve_tridiag(t.problem(), false).eigenvalues;
}

double max_rel_diff(const RealVector& a, const RealVector& b, double scale) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("tridiagonalize: already tridiagonal input is a fixed point") {
    DenseMatrix m(4, 4);
    const double diag[4] = {1.0, -2.0, 0.5, 3.0};
    const double off[3] = {0.25, -0.75, 1.5};
    for (int i = 0; i < 4; ++i) m(i, i) = diag[i];
    for (int i = 0; i < 3; ++i) {
        m(i + 1, i) = off[i];
        m(i, i + 1) = off[i];
    }
    const auto t = tridiagonalize(HermitianMatrix::from(std::move(m)), ProcedurePlan::host_serial());
    for (int i = 0; i < 4; ++i) CHECK(t.d[i] == doctest::Approx(diag[i]).epsilon(1e-14));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(t.e[i]) == doctest::Approx(std::abs(off[i])).epsilon(1e-14));
}

TEST_CASE("tridiagonalize: 1x1") {
    DenseMatrix m(1, 1);
    m(0, 0) = Complex(2.5, 0.0);
    const auto t = tridiagonalize(HermitianMatrix::from(std::move(m)), ProcedurePlan::host_serial());
    CHECK(t.d == RealVector{2.5});
    CHECK(t.e.empty());
    CHECK(t.records.empty());
}

TEST_CASE("tridiagonalize: ones plus identity keeps spectrum (1,1,4)") {
    DenseMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = Complex(i == j ? 2.0 : 1.0, 0.0);
    const auto t = tridiagonalize(HermitianMatrix::from(std::move(m)), ProcedurePlan::host_serial());
    const auto ev = sorted_tridiag_spectrum(t);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev[2] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("tridiagonalize: spectrum preservation vs jacobi oracle") {
    auto g = rng(41);
    for (const std::size_t n : {2u, 3u, 7u, 24u, 64u}) {
        const HermitianMatrix a = random_hermitian(g, n);
        const auto t = tridiagonalize(a, ProcedurePlan::host_serial());
        const auto hh = sorted_tridiag_spectrum(t);
        const auto jac = jacobi_eigen(a, false).eigenvalues;
        CHECK(max_rel_diff(hh, jac, a.frobenius_norm()) <= 1e-10);
    }
}

TEST_CASE("tridiagonalize: record invariants") {
    auto g = rng(42);
    const std::size_t n = 12;
    const HermitianMatrix a = random_hermitian(g, n);
    const auto t = tridiagonalize(a, ProcedurePlan::host_serial());
    REQUIRE(t.records.size() == n - 1);
    for (const auto& rec : t.records) {
        // s^2 equals the squared norm of the original column tail; cross-check
        // with the invariant that |u|^2 = 2h
        if (rec.h == 0.0) continue;
        double u2 = 0.0;
        for (std::size_t r = 0; r <= rec.stage; ++r) CHECK(rec.u[r] == Complex(0.0, 0.0));
        for (std::size_t r = rec.stage + 1; r < n; ++r) u2 += std::norm(rec.u[r]);
        CHECK(u2 == doctest::Approx(2.0 * rec.h).epsilon(1e-12));
        CHECK(std::abs(rec.phase) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("tridiagonalize: backend tags never change bits") {
    auto g = rng(43);
    const HermitianMatrix a = random_hermitian(g, 20);
    ThreadTeam team(3);
    const auto t_serial = tridiagonalize(a, ProcedurePlan::host_serial());
    const auto t_thread = tridiagonalize(a, ProcedurePlan::host_threaded(), &team);
    const auto t_device = tridiagonalize(a, ProcedurePlan::device_default(), &team);
    CHECK(t_serial.d == t_thread.d);
    CHECK(t_serial.e == t_thread.e);
    CHECK(t_serial.d == t_device.d);
    CHECK(t_serial.e == t_device.e);
    for (std::size_t i = 0; i < t_serial.records.size(); ++i) {
        CHECK(t_serial.records[i].u == t_device.records[i].u);
        CHECK(t_serial.records[i].h == t_device.records[i].h);
    }
}

TEST_CASE("tridiagonalize: injected procedure-6 fault breaks the spectrum") {
    auto g = rng(44);
    const HermitianMatrix a = random_hermitian(g, 10);
    ProcedurePlan plan = ProcedurePlan::host_serial();
    plan.fault_proc6_sign = true;
    const auto t = tridiagonalize(a, plan);
    const auto hh = sorted_tridiag_spectrum(t);
    const auto jac = jacobi_eigen(a, false).eigenvalues;
    CHECK(max_rel_diff(hh, jac, a.frobenius_norm()) > 1e-6);
}

TEST_CASE("back_transform: empty record list is identity") {
    auto g = rng(45);
    const DenseMatrix y = random_dense(g, 4, 2);
    const DenseMatrix out = back_transform({}, y);
    CHECK(max_abs_diff(out, y) == 0.0);
}

TEST_CASE("back_transform: single reflector matches explicit dense Q") {
    auto g = rng(46);
    const std::size_t n = 5;
    const HermitianMatrix a = random_hermitian(g, n);
    const auto t = tridiagonalize(a, ProcedurePlan::host_serial());

    // dense Q = P_0 P_1 ... built by applying the records to the identity
    const DenseMatrix q = back_transform(t.records, DenseMatrix::identity(n));
    // Q must be unitary and Q^H A Q must equal the real tridiagonal matrix
    CHECK(unitarity_defect(q) <= 1e-12);
    const DenseMatrix t_rebuilt = matmul_naive(q.conj_transpose(), matmul_naive(a.dense(), q));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex expect(0.0, 0.0);
            if (i == j) expect = t.d[i];
            else if (i + 1 == j) expect = t.e[i];
            else if (j + 1 == i) expect = t.e[j];
            CHECK(std::abs(t_rebuilt(i, j) - expect) <= 1e-12 * std::max(1.0, a.frobenius_norm()));
        }
}

TEST_CASE("back_transform: eigenvector residual on a random 8x8") {
    auto g = rng(47);
    const HermitianMatrix a = random_hermitian(g, 8);
    const auto r = eigen_hh(a, true);
    CHECK(eigen_residual(a, *r.eigenvectors, r.eigenvalues) <= 1e-10 * a.frobenius_norm());
}

TEST_CASE("back_transform: record/dimension mismatch") {
    auto g = rng(48);
    const HermitianMatrix a = random_hermitian(g, 6);
    const auto t = tridiagonalize(a, ProcedurePlan::host_serial());
    const DenseMatrix y = random_dense(g, 4, 4);  // wrong row count
    CHECK_THROWS_AS(back_transform(t.records, y), DimensionError);
}

TEST_CASE("normalize_columns: unit columns unchanged, 3-4-5 column scaled") {
    DenseMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    CHECK(max_abs_diff(normalize_columns(m), m) == 0.0);

    DenseMatrix v(2, 1);
    v(0, 0) = 3.0;
    v(1, 0) = 4.0;
    const DenseMatrix nv = normalize_columns(v);
    CHECK(nv(0, 0).real() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(nv(1, 0).real() == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("normalize_columns: random 16x16 all unit") {
    auto g = rng(49);
    const DenseMatrix m = random_dense(g, 16, 16);
    const DenseMatrix nm = normalize_columns(m);
    for (std::size_t j = 0; j < 16; ++j)
        CHECK(std::abs(column_norm(nm, j) - 1.0) <= 1e-14);
}

TEST_CASE("normalize_columns: zero column error names the column") {
    DenseMatrix m(3, 2);
    m(0, 0) = 1.0;
    CHECK_THROWS_WITH_AS(static_cast<void>(normalize_columns(m)),
                         "normalize_columns: zero column 1", Error);
}

TEST_CASE("eigen_hh: diag(5,-1) and the Pauli-y matrix") {
    DenseMatrix m(2, 2);
    m(0, 0) = 5.0;
    m(1, 1) = -1.0;
    auto r = eigen_hh(HermitianMatrix::from(std::move(m)), false);
    CHECK(r.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(r.eigenvalues[1] == doctest::Approx(5.0));

    DenseMatrix y(2, 2);
    y(0, 1) = Complex(0.0, 1.0);
    y(1, 0) = Complex(0.0, -1.0);
    r = eigen_hh(HermitianMatrix::from(std::move(y)), false);
    CHECK(r.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(r.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("eigen_hh: matches jacobi on random 64x64, with residual contract") {
    auto g = rng(50);
    const HermitianMatrix a = random_hermitian(g, 64);
    const auto r = eigen_hh(a, true, ProcedurePlan::device_default());
    const auto jac = jacobi_eigen(a, false).eigenvalues;
    CHECK(max_rel_diff(r.eigenvalues, jac, a.frobenius_norm()) <= 1e-10);
    CHECK(eigen_residual(a, *r.eigenvectors, r.eigenvalues) <= 1e-10 * a.frobenius_norm());
    CHECK(unitarity_defect(*r.eigenvectors) <= 1e-10);
}

TEST_CASE("eigen_hh: eigenvalues-only skips the eigenvector steps") {
    auto g = rng(51);
    const HermitianMatrix a = random_hermitian(g, 16);
    TimingLedger ledger;
    const auto r = eigen_hh(a, false, ProcedurePlan::host_serial(), nullptr, &ledger);
    CHECK(!r.eigenvectors.has_value());
    CHECK(!ledger.has(section::kRearrange));
    CHECK(!ledger.has(section::kNormalize));
    CHECK(ledger.has(section::kHouseholder));
    CHECK(ledger.has(section::kTridSolve));
}
