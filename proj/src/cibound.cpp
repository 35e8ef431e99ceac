#include "mlcrit/cibound.hpp"

#include "mlcrit/errors.hpp"

namespace mlcrit {

void validate_shape(const CIShape& shape) {
    int r = static_cast<int>(shape.degrees.size());
    if (shape.n < 1) throw UsageError("complete intersection: ambient dimension must be positive");
    if (r < 1 || r > shape.n)
        throw UsageError("complete intersection: need 1 <= r <= n hypersurfaces");
    for (int d : shape.degrees)
        if (d < 1) throw UsageError("complete intersection: degrees must be positive");
}

namespace {

// Sum of d_{from}^{i_from} * ... * d_{r-1}^{i_{r-1}} over all exponent tuples
// with total degree at most `budget`.
Int sum_monomials(const std::vector<int>& d, std::size_t from, int budget) {
    if (from == d.size()) return 1;
    Int total = 0;
    Int power = 1;
    for (int i = 0; i <= budget; ++i) {
        total += power * sum_monomials(d, from + 1, budget - i);
        power *= d[from];
    }
    return total;
}

} // namespace

Int thom_number_D(const CIShape& shape) {
    validate_shape(shape);
    int r = static_cast<int>(shape.degrees.size());
    return sum_monomials(shape.degrees, 0, shape.n - r);
}

Int ci_ml_bound(const CIShape& shape) {
    Int bound = thom_number_D(shape);
    for (int d : shape.degrees) bound *= d;
    return bound;
}

} // namespace mlcrit
