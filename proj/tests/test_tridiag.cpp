#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kband/tridiag.hpp"
#include "test_support.hpp"

using namespace kband;
using namespace kband::test;

TEST_CASE("solve_tridiag: decoupled diagonal") {
    const TridiagProblem p{{4.0, 2.0, 7.0}, {0.0, 0.0}};
    const auto r = solve_tridiag(p, false);
    CHECK(r.eigenvalues == RealVector{2.0, 4.0, 7.0});
}

TEST_CASE("solve_tridiag: n=1") {
    const auto r = solve_tridiag(TridiagProblem{{-3.5}, {}}, true);
    CHECK(r.eigenvalues == RealVector{-3.5});
    CHECK((*r.eigenvectors)(0, 0) == Complex(1.0, 0.0));
}

TEST_CASE("solve_tridiag: Chebyshev spectrum for d=0, e=1, n=4") {
    const TridiagProblem p{{0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    const auto r = solve_tridiag(p, false);
    // lambda_j = 2 cos(j pi / 5), j = 1..4, ascending
    for (std::size_t i = 0; i < 4; ++i) {
        const double expect = 2.0 * std::cos(static_cast<double>(4 - i) * std::numbers::pi / 5.0);
        CHECK(r.eigenvalues[i] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("solve_tridiag: residual, orthogonality and trace on random problems") {
    std::mt19937_64 g(77);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const std::size_t n : {2u, 3u, 9u, 33u}) {
        TridiagProblem p;
        p.d.resize(n);
        p.e.resize(n - 1);
        for (auto& x : p.d) x = u(g);
        for (auto& x : p.e) x = u(g);

        const auto r = solve_tridiag(p, true);
        const DenseMatrix& v = *r.eigenvectors;
        const double scale = 2.0 + 2.0;  // ||d||_inf + ||e||_inf bound for this generator

        for (std::size_t j = 0; j < n; ++j) {
            double res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                Complex tv = p.d[i] * v(i, j);
                if (i > 0) tv += p.e[i - 1] * v(i - 1, j);
                if (i + 1 < n) tv += p.e[i] * v(i + 1, j);
                res += std::norm(tv - r.eigenvalues[j] * v(i, j));
            }
            CHECK(std::sqrt(res) <= 1e-11 * scale);
        }
        CHECK(unitarity_defect(v) <= 1e-12);

        double sum_d = 0.0, sum_l = 0.0, max_abs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum_d += p.d[i];
            max_abs = std::max(max_abs, std::abs(p.d[i]));
        }
        for (double e : p.e) max_abs = std::max(max_abs, std::abs(e));
        for (double l : r.eigenvalues) sum_l += l;
        CHECK(std::abs(sum_l - sum_d) <= 1e-11 * static_cast<double>(n) * std::max(1.0, max_abs));

        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(r.eigenvalues[i] <= r.eigenvalues[i + 1]);
    }
}

TEST_CASE("sturm_count: symmetric pair split") {
    CHECK(sturm_count(TridiagProblem{{0.0, 0.0}, {1.0}}, 0.0) == 1);
}

TEST_CASE("sturm_count: below the Gershgorin bound") {
    const TridiagProblem p{{1.0, -2.0, 0.5}, {0.3, -0.7}};
    CHECK(sturm_count(p, -10.0) == 0);
    CHECK(sturm_count(p, 10.0) == 3);
}

TEST_CASE("sturm_count: agrees with solve_tridiag on random n=32") {
    std::mt19937_64 g(78);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagProblem p;
    p.d.resize(32);
    p.e.resize(31);
    for (auto& x : p.d) x = u(g);
    for (auto& x : p.e) x = u(g);

    const auto r = solve_tridiag(p, false);
    std::uniform_real_distribution<double> ux(-2.5, 2.5);
    for (int rep = 0; rep < 200; ++rep) {
        const double x = ux(g);
        std::size_t expect = 0;
        while (expect < r.eigenvalues.size() && r.eigenvalues[expect] < x) ++expect;
        CHECK(sturm_count(p, x) == expect);
    }
}

TEST_CASE("sturm_count: midpoints between sorted eigenvalues index the spectrum") {
    std::mt19937_64 g(79);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagProblem p;
    p.d.resize(12);
    p.e.resize(11);
    for (auto& x : p.d) x = u(g);
    for (auto& x : p.e) x = u(g);
    const auto r = solve_tridiag(p, false);
    for (std::size_t i = 0; i + 1 < r.eigenvalues.size(); ++i) {
        const double mid = 0.5 * (r.eigenvalues[i] + r.eigenvalues[i + 1]);
        if (r.eigenvalues[i + 1] - r.eigenvalues[i] < 1e-12) continue;  // cluster, index ambiguous
        CHECK(sturm_count(p, mid) == i + 1);
    }
}
