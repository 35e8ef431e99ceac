#pragma once

#include "mlcrit/monomial.hpp"
#include "mlcrit/rational.hpp"

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mlcrit {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// A polynomial ring: named variables plus a term order. Rings are immutable;
// polynomials hold a shared pointer to theirs.
class Ring {
public:
    Ring(std::vector<std::string> vars, MonomialOrder order);

    int nvars() const { return static_cast<int>(vars_.size()); }
    const std::string& var_name(int i) const { return vars_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& var_names() const { return vars_; }
    std::optional<int> var_index(std::string_view name) const;
    const MonomialOrder& order() const { return order_; }

    int compare(const Monomial& a, const Monomial& b) const { return order_.compare(a, b, nvars()); }

    // Structural equality: same variable names in the same positions, same order.
    bool same_as(const Ring& o) const { return vars_ == o.vars_ && order_ == o.order_; }
    // Same variables, possibly different term order.
    bool same_vars(const Ring& o) const { return vars_ == o.vars_; }

private:
    std::vector<std::string> vars_;
    MonomialOrder order_;
    std::map<std::string, int, std::less<>> index_;
};

RingPtr make_ring(std::vector<std::string> vars, MonomialOrder order = MonomialOrder::grevlex());

struct Term {
    Rat coeff;
    Monomial mono;
};

// Immutable sparse polynomial; terms are kept sorted strictly descending in
// the ring's term order with nonzero coefficients (the canonical form).
class Polynomial {
public:
    Polynomial() = default; // zero over no ring; usable only as a placeholder

    static Polynomial zero(RingPtr ring);
    static Polynomial constant(RingPtr ring, Rat c);
    static Polynomial variable(RingPtr ring, int index, int power = 1);
    static Polynomial monomial(RingPtr ring, Rat c, Monomial m);
    // Normalizes: sorts, merges equal monomials, drops zeros.
    static Polynomial from_terms(RingPtr ring, std::vector<Term> terms);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    const Term& leading_term() const { return terms_.front(); }
    const Monomial& leading_monomial() const { return terms_.front().mono; }
    const Rat& leading_coeff() const { return terms_.front().coeff; }

    int total_degree() const; // -1 for the zero polynomial
    bool is_homogeneous() const;
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    Rat constant_value() const; // requires is_constant()
    bool uses_var(int i) const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial scaled(const Rat& c) const;
    Polynomial pow(int e) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // a + c * x^shift * b, the reduction-step primitive (single merge pass).
    static Polynomial axpy(const Polynomial& a, const Rat& c, const Monomial& shift, const Polynomial& b);

    // s*a + c*x^shift*b in a single merge; lets fraction-free reduction scale
    // both sides without an extra pass.
    static Polynomial axpy2(const Rat& s, const Polynomial& a, const Rat& c, const Monomial& shift,
                            const Polynomial& b);
    // Same, but only the terms of `a` from index `from` onward participate
    // (the earlier ones are treated as already emitted by the caller).
    static Polynomial axpy_tail(const Polynomial& a, std::size_t from, const Rat& c, const Monomial& shift,
                                const Polynomial& b);

    Polynomial differentiate(int var) const;

    Rat evaluate(const std::vector<Rat>& point) const;
    // Kahan-compensated summation keeps residual evaluation stable for the
    // certification thresholds.
    std::complex<double> evaluate(const std::vector<std::complex<double>>& point) const;
    double evaluate(const std::vector<double>& point) const;

    // gcd of numerators over lcm of denominators, signed so that
    // primitive_part() has a positive leading coefficient.
    Rat content() const;
    Polynomial primitive_part() const;
    Polynomial monic() const;

    // Sum over i of |coeff_i| as a double (used for relative residuals).
    double coeff_one_norm() const;

    // Transport into `target`, mapping variable i of this ring to variable
    // var_map[i] of the target. Re-sorts under the target order.
    Polynomial map_vars(const RingPtr& target, const std::vector<int>& var_map) const;
    // Same variables, different order: re-sort only.
    Polynomial with_ring(const RingPtr& target) const;

    // Substitute value for one variable (exact).
    Polynomial substitute(int var, const Rat& value) const;
    // Substitute a polynomial for one variable (exact, possibly expensive).
    Polynomial substitute(int var, const Polynomial& value) const;

private:
    RingPtr ring_;
    std::vector<Term> terms_;
};

// Dense rational matrix used for linear coordinate changes.
struct RatMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;

    RatMatrix() = default;
    RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}
    Rat& at(int i, int j) { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
    const Rat& at(int i, int j) const {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }
};

// Apply the linear change of coordinates old_var_i -> sum_j M(i,j) * new_var_j.
// M has f.ring()->nvars() rows and target->nvars() columns.
Polynomial linear_substitute(const Polynomial& f, const RatMatrix& M, const RingPtr& target);

std::string format_monomial(const Ring& ring, const Monomial& m);
// Canonical text form; parse_polynomial(format_polynomial(f)) == f.
std::string format_polynomial(const Polynomial& f);

} // namespace mlcrit
