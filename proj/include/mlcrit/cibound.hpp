#pragma once

#include "mlcrit/rational.hpp"

#include <vector>

namespace mlcrit {

// A complete intersection of r hypersurfaces of degrees d_1..d_r inside
// projective n-space.
struct CIShape {
    int n = 0;                // ambient projective dimension
    std::vector<int> degrees; // d_1..d_r, all >= 1, r <= n
};

void validate_shape(const CIShape& shape);

// Sum of all monomials in d_1..d_r of total degree at most n - r, evaluated
// at the given degrees. Exact enumeration over exponent tuples.
Int thom_number_D(const CIShape& shape);

// Upper bound D * d_1 * ... * d_r on the ML degree of a generic complete
// intersection of the given shape.
Int ci_ml_bound(const CIShape& shape);

} // namespace mlcrit
