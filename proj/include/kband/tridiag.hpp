#pragma once

#include "kband/linalg.hpp"

namespace kband {

struct TridiagProblem {
    RealVector d;  // n diagonal entries
    RealVector e;  // n-1 off-diagonal entries
};

struct TridiagEigenResult {
    RealVector eigenvalues;                  // ascending
    std::optional<DenseMatrix> eigenvectors;  // real orthogonal, stored complex
};

/// Implicit-shift QL with Wilkinson shift. Runs single-threaded per instance;
/// callers may solve many problems concurrently.
TridiagEigenResult solve_tridiag(const TridiagProblem& p, bool want_vectors,
                                 WorkTally* tally = nullptr);

/// Number of eigenvalues strictly below x (Sturm sequence with pivot guard).
std::size_t sturm_count(const TridiagProblem& p, double x);

}  // namespace kband
