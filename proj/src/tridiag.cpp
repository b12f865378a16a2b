#include "kband/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kband {

namespace {
constexpr double kSplitEps = 1e-15;  // |e_i| <= eps*(|d_i|+|d_i+1|) splits the problem
}

TridiagEigenResult solve_tridiag(const TridiagProblem& prob, bool want_vectors, WorkTally* tally) {
    const std::size_t n = prob.d.size();
    if (n == 0) throw DimensionError("solve_tridiag: empty problem");
    if (prob.e.size() + 1 != n) throw DimensionError("solve_tridiag: off-diagonal length must be n-1");

    RealVector d = prob.d;
    RealVector e = prob.e;
    e.push_back(0.0);  // sentinel

    std::vector<RealVector> z;  // z[k] = row k of the rotation product
    if (want_vectors) {
        z.assign(n, RealVector(n, 0.0));
        for (std::size_t k = 0; k < n; ++k) z[k][k] = 1.0;
    }

    double flops = 0.0;
    const long max_iter = 30 * static_cast<long>(n);
    long iter = 0;

    for (std::size_t l = 0; l < n; ++l) {
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kSplitEps * dd) break;
            }
            if (m != l) {
                if (++iter > max_iter) {
                    std::ostringstream os;
                    os << "solve_tridiag: no convergence at index " << l << " after " << max_iter
                       << " implicit-shift iterations";
                    throw ConvergenceError(os.str());
                }
                // Wilkinson shift
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    double f = s * e[ii];
                    const double b = c * e[ii];
                    r = std::hypot(f, g);
                    e[ii + 1] = r;
                    if (r == 0.0) {
                        d[ii + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[ii + 1] - p;
                    r = (d[ii] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[ii + 1] = g + p;
                    g = c * r - b;
                    flops += 14.0;
                    if (want_vectors) {
                        RealVector& zi = z[ii];
                        RealVector& zi1 = z[ii + 1];
                        for (std::size_t k = 0; k < n; ++k) {
                            f = zi1[k];
                            zi1[k] = s * zi[k] + c * f;
                            zi[k] = c * zi[k] - s * f;
                        }
                        flops += 6.0 * static_cast<double>(n);
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // ascending sort, carrying rows of z along as eigenvector columns
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

    TridiagEigenResult out;
    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = d[order[i]];
    if (want_vectors) {
        DenseMatrix v(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            const RealVector& zral = z[order[j]];
            for (std::size_t i = 0; i < n; ++i) v(i, j) = Complex(zral[i], 0.0);
        }
        out.eigenvectors = std::move(v);
    }
    if (tally) tally->add(flops, 8.0 * static_cast<double>(n) * (want_vectors ? n : 4.0));
    return out;
}

std::size_t sturm_count(const TridiagProblem& p, double x) {
    const std::size_t n = p.d.size();
    if (n == 0) return 0;
    if (p.e.size() + 1 != n) throw DimensionError("sturm_count: off-diagonal length must be n-1");

    std::size_t count = 0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        q = (i == 0) ? p.d[0] - x : p.d[i] - x - p.e[i - 1] * p.e[i - 1] / q;
        if (q == 0.0) q = -1e-300;  // pivot-underflow guard: a zero pivot counts as below
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace kband
