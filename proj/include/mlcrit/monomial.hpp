#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mlcrit {

inline constexpr int kMaxVars = 16;

// Exponent vector with cached total degree. The fixed-width array keeps
// monomials POD-like and cheap to copy inside the Groebner inner loops.
struct Monomial {
    std::int32_t degree = 0;
    std::array<std::uint16_t, kMaxVars> exp{};

    static Monomial one() { return Monomial{}; }

    static Monomial var(int i, int power = 1) {
        Monomial m;
        m.exp[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(power);
        m.degree = power;
        return m;
    }

    bool is_one() const { return degree == 0; }

    std::uint16_t operator[](int i) const { return exp[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.degree == b.degree && a.exp == b.exp;
    }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
// Requires divides(a, b): componentwise b - a.
Monomial mono_div(const Monomial& b, const Monomial& a);
bool mono_divides(const Monomial& a, const Monomial& b);
Monomial mono_lcm(const Monomial& a, const Monomial& b);
bool mono_coprime(const Monomial& a, const Monomial& b);

// Term orders. Elim(k) compares the first k permuted positions as a grevlex
// block before the rest; it is the block order used for elimination.
enum class OrderKind { Lex, Grevlex, Elim };

class MonomialOrder {
public:
    MonomialOrder() : kind_(OrderKind::Grevlex) {}

    static MonomialOrder lex() { return MonomialOrder(OrderKind::Lex, 0, {}); }
    static MonomialOrder grevlex() { return MonomialOrder(OrderKind::Grevlex, 0, {}); }
    static MonomialOrder elim(int block_size, std::vector<int> perm = {}) {
        return MonomialOrder(OrderKind::Elim, block_size, std::move(perm));
    }
    static MonomialOrder lex_perm(std::vector<int> perm) {
        return MonomialOrder(OrderKind::Lex, 0, std::move(perm));
    }
    static MonomialOrder grevlex_perm(std::vector<int> perm) {
        return MonomialOrder(OrderKind::Grevlex, 0, std::move(perm));
    }

    OrderKind kind() const { return kind_; }
    int block_size() const { return block_; }
    const std::vector<int>& permutation() const { return perm_; }

    // Positive if a > b, negative if a < b, zero if equal.
    int compare(const Monomial& a, const Monomial& b, int nvars) const;

    bool operator==(const MonomialOrder& o) const {
        return kind_ == o.kind_ && block_ == o.block_ && perm_ == o.perm_;
    }

private:
    MonomialOrder(OrderKind kind, int block, std::vector<int> perm)
        : kind_(kind), block_(block), perm_(std::move(perm)) {}

    OrderKind kind_;
    int block_ = 0;
    std::vector<int> perm_; // empty means identity (declaration order)
};

} // namespace mlcrit
