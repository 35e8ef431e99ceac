#pragma once

#include "mlcrit/polynomial.hpp"

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace mlcrit {

// Knobs shared by every Groebner-driven computation. `deadline` aborts the
// pair loop with ComputationTimeout; `progress` (if set) receives occasional
// (basis size, pending pairs) snapshots for diagnostics. `modular` allows the
// multi-prime lift path, which avoids the coefficient swell of rational
// Buchberger; the lifted basis is always re-verified in exact arithmetic.
struct GBOptions {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::string stage = "groebner basis";
    std::function<void(int, std::size_t)> progress;
    bool modular = true;

    GBOptions named(const std::string& s) const {
        GBOptions o = *this;
        o.stage = s;
        return o;
    }
};

// An ideal of the ring, with a lazily computed and cached reduced Groebner
// basis (monic, pairwise tail-reduced, sorted by increasing leading monomial).
// The basis is always taken under the ring's own term order.
class Ideal {
public:
    Ideal() = default;
    Ideal(RingPtr ring, std::vector<Polynomial> gens);

    // Marks `gb` as already being the reduced basis (caller guarantees it).
    static Ideal from_groebner_basis(RingPtr ring, std::vector<Polynomial> gb);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Polynomial>& generators() const { return gens_; }
    const std::vector<Polynomial>& groebner_basis(const GBOptions& opts = {}) const;
    bool has_cached_basis() const { return gb_ != nullptr; }

private:
    RingPtr ring_;
    std::vector<Polynomial> gens_;
    mutable std::shared_ptr<const std::vector<Polynomial>> gb_;
};

// Rebuild the ideal over a ring with the same variables but a new term order.
Ideal with_order(const Ideal& I, const MonomialOrder& order);

// Canonical remainder modulo the reduced basis.
Polynomial normal_form(const Polynomial& f, const Ideal& I, const GBOptions& opts = {});

bool ideal_contains(const Ideal& I, const Polynomial& f, const GBOptions& opts = {});
bool is_unit_ideal(const Ideal& I, const GBOptions& opts = {});
// Equality as ideals (reduced bases compared under A's term order).
bool ideal_equal(const Ideal& A, const Ideal& B, const GBOptions& opts = {});

// Elimination ideal: drops the listed variables and returns an ideal over the
// subring spanned by the remaining ones (declaration order preserved).
Ideal eliminate(const Ideal& I, const std::vector<int>& drop_vars, const GBOptions& opts = {});

// Ideal quotient (I : f), via intersection with <f> and exact division.
Ideal ideal_quotient(const Ideal& I, const Polynomial& f, const GBOptions& opts = {});

// Saturation (I : f^inf), computed by eliminating t from I + <t*f - 1>.
Ideal saturate(const Ideal& I, const Polynomial& f, const GBOptions& opts = {});

struct DimResult {
    int dimension;   // Krull dimension of the affine vanishing set
    int codimension; // nvars - dimension
};

// Dimension from the maximal independent variable sets of the leading-term
// ideal. Throws UnitIdealError on the unit ideal.
DimResult dimension_codim(const Ideal& I, const GBOptions& opts = {});

// Monomials outside the leading-term ideal, sorted increasing in the ring
// order. Requires dimension zero (else DimensionError).
std::vector<Monomial> standard_monomials(const Ideal& I, const GBOptions& opts = {});

// Vector-space dimension of R/I; requires dimension zero.
long colength(const Ideal& I, const GBOptions& opts = {});

// Exact division (throws if the division leaves a remainder).
Polynomial exact_divide(const Polynomial& g, const Polynomial& f);

// Engine entry point shared with the tests: reduced basis of the span of
// `gens` under the order of `ring`.
std::vector<Polynomial> buchberger(const RingPtr& ring, std::vector<Polynomial> gens,
                                   const GBOptions& opts = {});

} // namespace mlcrit
