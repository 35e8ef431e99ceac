#pragma once

#include "mlcrit/parser.hpp"
#include "mlcrit/polynomial.hpp"
#include "mlcrit/rng.hpp"

#include <string>
#include <vector>

namespace testutil {

using namespace mlcrit;

inline Polynomial rand_poly(const RingPtr& ring, Rng& rng, int max_terms = 6, int max_exp = 3) {
    std::vector<Term> terms;
    int nt = static_cast<int>(rng.uniform(1, static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < nt; ++t) {
        Monomial m;
        int deg = 0;
        for (int i = 0; i < ring->nvars(); ++i) {
            int e = static_cast<int>(rng.uniform(0, static_cast<std::uint64_t>(max_exp)));
            m.exp[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(e);
            deg += e;
        }
        m.degree = deg;
        Rat c(rng.uniform_signed(-9, 9));
        if (c == 0) c = 1;
        terms.push_back({c, m});
    }
    return Polynomial::from_terms(ring, std::move(terms));
}

inline Rat coefficient_of(const Polynomial& f, const Monomial& m) {
    for (const auto& t : f.terms())
        if (t.mono == m) return t.coeff;
    return Rat(0);
}

inline Monomial mono_of(const RingPtr& ring, const std::string& text) {
    Polynomial p = parse_polynomial(ring, text);
    return p.leading_monomial();
}

// Test-local cofactor expansion, independent of any production determinant code.
inline Polynomial det_cofactor(const std::vector<std::vector<Polynomial>>& m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Polynomial sum = Polynomial::zero(m[0][0].ring());
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<Polynomial>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Polynomial> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            sub.push_back(std::move(row));
        }
        Polynomial c = m[0][j] * det_cofactor(sub);
        sum = (j % 2 == 0) ? sum + c : sum - c;
    }
    return sum;
}

} // namespace testutil
