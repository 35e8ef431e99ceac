#pragma once

#include "mlcrit/ideal.hpp"

#include <optional>
#include <vector>

namespace mlcrit::detail {

// Reduced-basis candidate assembled from Groebner runs over several word-size
// prime fields: runs whose leading-term signatures agree are combined by CRT
// and the coefficients lifted back to rationals. The result is monic and
// sorted by increasing leading monomial, matching the exact engine's
// canonical form. Returns nullopt when the primes keep disagreeing or the
// lift does not stabilize within the prime budget. Callers must verify the
// candidate over the rationals before trusting it.
std::optional<std::vector<Polynomial>> modular_groebner_candidate(const RingPtr& ring,
                                                                  const std::vector<Polynomial>& gens,
                                                                  const GBOptions& opts);

} // namespace mlcrit::detail
