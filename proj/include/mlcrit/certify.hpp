#pragma once

#include "mlcrit/likelihood.hpp"
#include "mlcrit/linalg.hpp"
#include "mlcrit/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mlcrit {

struct LocalMaximumReport {
    std::vector<double> point; // positive real coordinates on the simplex
    double log_likelihood = 0.0;
    std::vector<double> multipliers; // index 0 is the simplex multiplier (the sample size)
    std::vector<double> restricted_hessian_eigenvalues; // ascending, all negative
    bool is_global_among_found = false;                 // set on exactly one report per run
};

// Evaluate a polynomial matrix entrywise at a real point.
RealMatrix evaluate_matrix(const PolyMatrix& A, const std::vector<double>& p);

// Sum of u_i * log(p_i); terms with u_i = 0 contribute nothing.
double log_likelihood(const DataVector& u, const std::vector<double>& p);

// Least-squares solution of jt_at_p^T * lambda = u. At a true critical point
// the system is consistent; a residual above tol * ||u|| flags a spurious
// point and throws.
std::vector<double> lagrange_multipliers(const std::vector<double>& p_star, const DataVector& u,
                                         const RealMatrix& jt_at_p, double tol = 1e-6);

struct RestrictedHessian {
    RealMatrix matrix; // B^T H B, symmetric of size (tangent dimension)^2
    RealMatrix basis;  // B: orthonormal columns spanning ker J(p_star)
};

// Hessian of the log-likelihood Lagrangian restricted to the tangent space of
// the model at p_star: H = diag(-u_i/p_i^2) - sum_i lambda_{i+1} Hess(g_i),
// projected onto an orthonormal null-space basis of the one-augmented
// Jacobian. The sample-size term is linear in p, so it drops out of H, and
// the rank-one normalization term vanishes on the basis because every basis
// vector is orthogonal to the all-ones row.
RestrictedHessian restricted_hessian(const std::vector<double>& p_star, const std::vector<double>& lambda,
                                     const DataVector& u, const ImplicitModel& model);

enum class Definiteness {
    NegativeDefinite, // certified local maximum
    Inconclusive,     // largest eigenvalue within the tolerance band of zero
    NotMaximum,       // some eigenvalue is clearly positive
};

double definiteness_tolerance(const RealMatrix& H, double rel = 1e-9);
Definiteness classify_definiteness(const std::vector<double>& ascending_eigenvalues, double tol);

struct CertifyOptions {
    LikelihoodOptions likelihood;
    SolveTolerances solve;
    std::uint64_t solver_seed = 1;
    double multiplier_tol = 1e-6;
    double definiteness_rel = 1e-9;
};

struct MaximizeResult {
    LikelihoodIdealResult ideal;
    SolveResult solve;
    std::vector<LocalMaximumReport> maxima; // sorted by log-likelihood, best first
    std::vector<std::string> warnings;
};

// Full pipeline: likelihood ideal, all critical points, then a second-order
// certificate for every positive one.
MaximizeResult find_local_maxima(const ImplicitModel& model, const DataVector& u,
                                 const CertifyOptions& opts = {});

} // namespace mlcrit
