#include "mlcrit/monomial.hpp"

#include <cassert>

namespace mlcrit {

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i)
        r.exp[static_cast<std::size_t>(i)] =
            static_cast<std::uint16_t>(a.exp[static_cast<std::size_t>(i)] + b.exp[static_cast<std::size_t>(i)]);
    r.degree = a.degree + b.degree;
    return r;
}

Monomial mono_div(const Monomial& b, const Monomial& a) {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
        assert(b.exp[static_cast<std::size_t>(i)] >= a.exp[static_cast<std::size_t>(i)]);
        r.exp[static_cast<std::size_t>(i)] =
            static_cast<std::uint16_t>(b.exp[static_cast<std::size_t>(i)] - a.exp[static_cast<std::size_t>(i)]);
    }
    r.degree = b.degree - a.degree;
    return r;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
    if (a.degree > b.degree) return false;
    for (int i = 0; i < kMaxVars; ++i)
        if (a.exp[static_cast<std::size_t>(i)] > b.exp[static_cast<std::size_t>(i)]) return false;
    return true;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    int deg = 0;
    for (int i = 0; i < kMaxVars; ++i) {
        std::uint16_t e = std::max(a.exp[static_cast<std::size_t>(i)], b.exp[static_cast<std::size_t>(i)]);
        r.exp[static_cast<std::size_t>(i)] = e;
        deg += e;
    }
    r.degree = deg;
    return r;
}

bool mono_coprime(const Monomial& a, const Monomial& b) {
    for (int i = 0; i < kMaxVars; ++i)
        if (a.exp[static_cast<std::size_t>(i)] != 0 && b.exp[static_cast<std::size_t>(i)] != 0) return false;
    return true;
}

namespace {

inline int pos_to_var(const std::vector<int>& perm, int pos) {
    return perm.empty() ? pos : perm[static_cast<std::size_t>(pos)];
}

int lex_scan(const Monomial& a, const Monomial& b, const std::vector<int>& perm, int from, int to) {
    for (int pos = from; pos < to; ++pos) {
        int v = pos_to_var(perm, pos);
        int d = static_cast<int>(a[v]) - static_cast<int>(b[v]);
        if (d != 0) return d > 0 ? 1 : -1;
    }
    return 0;
}

// Reverse scan for the grevlex tie-break: last position where the exponents
// differ; the one with the SMALLER exponent there is the larger monomial.
int revlex_scan(const Monomial& a, const Monomial& b, const std::vector<int>& perm, int from, int to) {
    for (int pos = to - 1; pos >= from; --pos) {
        int v = pos_to_var(perm, pos);
        int d = static_cast<int>(a[v]) - static_cast<int>(b[v]);
        if (d != 0) return d < 0 ? 1 : -1;
    }
    return 0;
}

int block_degree(const Monomial& m, const std::vector<int>& perm, int from, int to) {
    int deg = 0;
    for (int pos = from; pos < to; ++pos) deg += m[pos_to_var(perm, pos)];
    return deg;
}

} // namespace

int MonomialOrder::compare(const Monomial& a, const Monomial& b, int nvars) const {
    switch (kind_) {
    case OrderKind::Lex:
        return lex_scan(a, b, perm_, 0, nvars);
    case OrderKind::Grevlex: {
        if (a.degree != b.degree) return a.degree > b.degree ? 1 : -1;
        return revlex_scan(a, b, perm_, 0, nvars);
    }
    case OrderKind::Elim: {
        int da = block_degree(a, perm_, 0, block_);
        int db = block_degree(b, perm_, 0, block_);
        if (da != db) return da > db ? 1 : -1;
        if (int c = revlex_scan(a, b, perm_, 0, block_)) return c;
        int ra = a.degree - da, rb = b.degree - db;
        if (ra != rb) return ra > rb ? 1 : -1;
        return revlex_scan(a, b, perm_, block_, nvars);
    }
    }
    return 0;
}

} // namespace mlcrit
