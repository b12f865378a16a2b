#include "kband/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kband {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
}

DenseMatrix DenseMatrix::conj_transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

double DenseMatrix::hermitian_defect() const {
    if (rows_ != cols_) throw DimensionError("hermitian_defect: matrix not square");
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

bool DenseMatrix::all_finite() const {
    for (const Complex& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

HermitianMatrix HermitianMatrix::from(DenseMatrix m, double repair_tol) {
    if (m.rows() != m.cols()) throw DimensionError("HermitianMatrix: matrix not square");
    if (!m.all_finite()) throw ConsistencyError("HermitianMatrix: non-finite entries");
    const double defect = m.hermitian_defect();
    if (defect > repair_tol) {
        std::ostringstream os;
        os << "HermitianMatrix: defect " << defect << " exceeds tolerance " << repair_tol;
        throw ConsistencyError(os.str());
    }
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Complex(m(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }
    }
    return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::from_scaled(DenseMatrix m, double rel_tol) {
    const double scale = std::max(1.0, m.frobenius_norm());
    return from(std::move(m), rel_tol * scale);
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
    return HermitianMatrix(DenseMatrix::identity(n));
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
    return HermitianMatrix(DenseMatrix(n, n));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, WorkTally* tally, ThreadTeam* team) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: inner dimensions differ");
    const std::size_t n = a.rows(), kk = a.cols(), m = b.cols();
    DenseMatrix c(n, m);
    if (n == 0 || kk == 0 || m == 0) return c;

    // k is blocked for cache reuse but always ascends, so accumulation order
    // per entry matches the naive triple loop bitwise.
    constexpr std::size_t kb = 64;
    auto body = [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            double* ci = reinterpret_cast<double*>(c.row(i));
            for (std::size_t k0 = 0; k0 < kk; k0 += kb) {
                const std::size_t k1 = std::min(kk, k0 + kb);
                for (std::size_t k = k0; k < k1; ++k) {
                    const Complex aik = a(i, k);
                    const double ar = aik.real(), ai = aik.imag();
                    const double* bk = reinterpret_cast<const double*>(b.row(k));
                    for (std::size_t j = 0; j < m; ++j) {
                        const double br = bk[2 * j], bi = bk[2 * j + 1];
                        ci[2 * j] += ar * br - ai * bi;
                        ci[2 * j + 1] += ar * bi + ai * br;
                    }
                }
            }
        }
    };
    if (team && team->size() > 1 && n > 1) {
        team->parallel_for(n, [&](std::size_t r0, std::size_t r1) { body(r0, r1); });
    } else {
        body(0, n);
    }
    if (tally) {
        const double fl = 8.0 * static_cast<double>(n) * static_cast<double>(kk) * static_cast<double>(m);
        // idealized blocked traffic: each operand streamed once
        const double by = 16.0 * (static_cast<double>(n) * kk + static_cast<double>(kk) * m +
                                  static_cast<double>(n) * m);
        tally->add(fl, by);
    }
    return c;
}

HermitianMatrix triple_product(const DenseMatrix& t, const HermitianMatrix& h, WorkTally* tally,
                               ThreadTeam* team) {
    if (t.rows() != h.dim()) throw DimensionError("triple_product: T rows must match H dim");
    const DenseMatrix ht = matmul(h.dense(), t, tally, team);
    const DenseMatrix tc = t.conj_transpose();
    DenseMatrix c = matmul(tc, ht, tally, team);
    if (tally) tally->add(0.0, 16.0 * static_cast<double>(t.rows()) * t.cols());
    return HermitianMatrix::from_scaled(std::move(c));
}

EigenResult jacobi_eigen(const HermitianMatrix& a_in, bool want_vectors, int max_sweeps) {
    const std::size_t n = a_in.dim();
    if (n > 512) throw DimensionError("jacobi_eigen: oracle limited to dim <= 512");

    DenseMatrix a = a_in.dense();
    DenseMatrix v = DenseMatrix::identity(n);
    EigenResult out;
    if (n == 0) return out;

    const double anorm = std::max(a.frobenius_norm(), 1e-300);
    const double stop = 1e-13 * anorm;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    bool converged = n == 1;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        if (off_norm() <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g <= stop / (static_cast<double>(n) * n)) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double hh = (aqq - app) / (2.0 * g);
                const double t = (hh >= 0.0) ? -1.0 / (hh + std::sqrt(hh * hh + 1.0))
                                             : 1.0 / (-hh + std::sqrt(hh * hh + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex phase = apq / g;

                // rows p,q:  A <- U^H A
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr + s * phase * aqr;
                    a(q, r) = -s * std::conj(phase) * apr + c * aqr;
                }
                // cols p,q:  A <- A U
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp + s * std::conj(phase) * arq;
                    a(r, q) = -s * phase * arp + c * arq;
                }
                a(p, p) = Complex(app + t * g, 0.0);
                a(q, q) = Complex(aqq - t * g, 0.0);
                a(p, q) = Complex(0.0, 0.0);
                a(q, p) = Complex(0.0, 0.0);
                if (want_vectors) {
                    for (std::size_t r = 0; r < n; ++r) {
                        const Complex vrp = v(r, p), vrq = v(r, q);
                        v(r, p) = c * vrp + s * std::conj(phase) * vrq;
                        v(r, q) = -s * phase * vrp + c * vrq;
                    }
                }
            }
        }
    }
    if (!converged && off_norm() > stop)
        throw ConvergenceError("jacobi_eigen: no convergence after sweep limit");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    out.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.eigenvalues[i] = a(order[i], order[i]).real();
    if (want_vectors) {
        DenseMatrix sorted(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) sorted(i, j) = v(i, order[j]);
        out.eigenvectors = std::move(sorted);
    }
    return out;
}

double column_norm(const DenseMatrix& m, std::size_t col) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::norm(m(i, col));
    return std::sqrt(s);
}

DenseMatrix scale_columns(const DenseMatrix& m, const RealVector& s) {
    if (s.size() != m.cols()) throw DimensionError("scale_columns: size mismatch");
    DenseMatrix r = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) *= s[j];
    return r;
}

}  // namespace kband
