#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "kband/common.hpp"

namespace kband {

/// Dense complex matrix, row-major.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Complex* data() { return a_.data(); }
    const Complex* data() const { return a_.data(); }
    Complex* row(std::size_t i) { return a_.data() + i * cols_; }
    const Complex* row(std::size_t i) const { return a_.data() + i * cols_; }

    DenseMatrix conj_transpose() const;
    double frobenius_norm() const;
    /// max_{i,j} |A[i][j] - conj(A[j][i])| (square matrices only).
    double hermitian_defect() const;
    bool all_finite() const;

    bool operator==(const DenseMatrix& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    ComplexVector a_;
};

/// Hermitian matrix. Construction symmetrizes defects up to `repair_tol`
/// (averaging with the conjugate transpose, zeroing diagonal imaginary parts)
/// and rejects anything larger as an internal-consistency error.
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    static constexpr double kRepairTol = 1e-13;

    static HermitianMatrix from(DenseMatrix m, double repair_tol = kRepairTol);
    /// Same repair, but the acceptable defect scales with the matrix norm.
    /// Used where accumulation noise grows with problem size.
    static HermitianMatrix from_scaled(DenseMatrix m, double rel_tol = kRepairTol);
    static HermitianMatrix identity(std::size_t n);
    static HermitianMatrix zero(std::size_t n);

    std::size_t dim() const { return m_.rows(); }
    const DenseMatrix& dense() const { return m_; }
    DenseMatrix& mutable_dense() { return m_; }

    const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    double frobenius_norm() const { return m_.frobenius_norm(); }

private:
    explicit HermitianMatrix(DenseMatrix m) : m_(std::move(m)) {}
    DenseMatrix m_;
};

/// C = A * B. Cache-blocked over k with ascending accumulation order, so the
/// result is bitwise identical to the naive i,j,k triple loop. Rows may be
/// computed by a thread team (rows are independent).
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, WorkTally* tally = nullptr,
                   ThreadTeam* team = nullptr);

/// T^H * H * T, re-symmetrized and validated Hermitian.
HermitianMatrix triple_product(const DenseMatrix& t, const HermitianMatrix& h,
                               WorkTally* tally = nullptr, ThreadTeam* team = nullptr);

struct EigenResult {
    RealVector eigenvalues;                 // ascending
    std::optional<DenseMatrix> eigenvectors;  // columns
};

/// Cyclic complex Jacobi eigensolver. Brute-force oracle for tests and
/// derived expected values; dim capped at 512.
EigenResult jacobi_eigen(const HermitianMatrix& a, bool want_vectors = true, int max_sweeps = 100);

// Small helpers shared by solvers and tests.
double column_norm(const DenseMatrix& m, std::size_t col);
DenseMatrix scale_columns(const DenseMatrix& m, const RealVector& s);

}  // namespace kband
