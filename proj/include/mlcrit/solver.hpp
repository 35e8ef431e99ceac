#pragma once

#include "mlcrit/ideal.hpp"
#include "mlcrit/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mlcrit {

struct SolveTolerances {
    double residual = 1e-8; // per generator, relative to 1 + its coefficient 1-norm
    double imag = 1e-7;     // |Im| <= imag * (1 + |coord|) counts as real
    double positive = 1e-10; // real part must exceed this to count as positive
};

struct CriticalPoint {
    std::vector<cd> coords;
    double residual = 0.0; // max over generators of |g(z)| / (1 + coefficient 1-norm)
    int multiplicity = 1;
    bool is_real = false;
    bool is_positive = false;
    bool borderline = false; // some coordinate within 10x of a classification cutoff
};

struct SolveResult {
    std::vector<CriticalPoint> points; // sorted lexicographically by (Re, Im) coordinates
    long total_multiplicity = 0;       // always equals the colength
    int separating_retries = 0;
    bool all_certified = false; // every point met the residual tolerance
    std::vector<std::string> warnings;
};

// All complex zeros of a zero-dimensional ideal, counted with multiplicity.
// Eigenvalue method: the action of a random separating linear form on the
// standard-monomial basis is diagonalized, coordinates are read off the
// eigenvectors of the transpose, and every point is polished with
// Gauss-Newton on the original generators. Eigenvalues closer than the
// separation cutoff trigger a retry with a fresh form (up to five); clusters
// that persist are reported as one point with multiplicity.
SolveResult solve_zero_dim(const Ideal& I, std::uint64_t seed, const SolveTolerances& tol = {},
                           const GBOptions& gb = {});

struct Classification {
    std::vector<int> complex_points;  // indices into the solve result
    std::vector<int> real_points;     // real but not positive
    std::vector<int> positive_points; // strictly positive coordinates
};

Classification classify_points(const std::vector<CriticalPoint>& points);

} // namespace mlcrit
