#include "mlcrit/errors.hpp"
#include "mlcrit/ideal.hpp"
#include "mlcrit/parser.hpp"
#include "mlcrit/rng.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace mlcrit;
using namespace testutil;

namespace {

Ideal ideal_of(const RingPtr& R, const std::vector<std::string>& gens) {
    std::vector<Polynomial> ps;
    for (const auto& s : gens) ps.push_back(parse_polynomial(R, s));
    return Ideal(R, std::move(ps));
}

// Buchberger's criterion, checked from scratch: every pairwise S-polynomial
// of the basis reduces to zero against it. Used as the ground-truth oracle
// for the engine's pair-elimination shortcuts.
bool satisfies_buchberger_criterion(const RingPtr& R, const std::vector<Polynomial>& gb) {
    for (std::size_t i = 0; i < gb.size(); ++i) {
        for (std::size_t j = i + 1; j < gb.size(); ++j) {
            Monomial l = mono_lcm(gb[i].leading_monomial(), gb[j].leading_monomial());
            Polynomial s = Polynomial::axpy(Polynomial::zero(R), Rat(1) / gb[i].leading_coeff(),
                                            mono_div(l, gb[i].leading_monomial()), gb[i]);
            s = Polynomial::axpy(s, Rat(-1) / gb[j].leading_coeff(), mono_div(l, gb[j].leading_monomial()),
                                 gb[j]);
            if (!normal_form(s, Ideal::from_groebner_basis(R, gb)).is_zero()) return false;
        }
    }
    return true;
}

} // namespace

TEST_SUITE_BEGIN("groebner");

TEST_CASE("two-generator example reduces to the known basis") {
    auto R = make_ring({"x", "y"});
    Ideal I = ideal_of(R, {"x*y - 1", "y^2 - 1"});
    const auto& gb = I.groebner_basis();
    REQUIRE(gb.size() == 2);
    CHECK(gb[0] == parse_polynomial(R, "x - y"));
    CHECK(gb[1] == parse_polynomial(R, "y^2 - 1"));
}

TEST_CASE("a principal ideal's basis is the monic generator") {
    auto R = make_ring({"p0", "p1", "p2"});
    Ideal I = ideal_of(R, {"p0^2 + p1^2 + p2^2 - 2*p0*p1 - 2*p0*p2 - 2*p1*p2"});
    const auto& gb = I.groebner_basis();
    REQUIRE(gb.size() == 1);
    CHECK(gb[0] == parse_polynomial(R, "p0^2 + p1^2 + p2^2 - 2*p0*p1 - 2*p0*p2 - 2*p1*p2"));
}

TEST_CASE("pair-elimination shortcuts preserve Buchberger's criterion") {
    auto R = make_ring({"x", "y", "z"});
    Rng rng(424242);
    for (int iter = 0; iter < 12; ++iter) {
        std::vector<Polynomial> gens;
        int ng = 2 + static_cast<int>(rng.uniform(0, 1));
        for (int g = 0; g < ng; ++g) gens.push_back(rand_poly(R, rng, 4, 2));
        Ideal I(R, gens);
        const auto& gb = I.groebner_basis();
        if (gb.empty()) continue;
        CHECK(satisfies_buchberger_criterion(R, gb));
        // Each input generator must reduce to zero.
        for (const auto& g : gens) CHECK(normal_form(g, I).is_zero());
    }
}

TEST_CASE("reduced basis is monic, interreduced and sorted") {
    auto R = make_ring({"x", "y", "z"});
    Rng rng(31337);
    for (int iter = 0; iter < 10; ++iter) {
        Ideal I(R, {rand_poly(R, rng, 4, 2), rand_poly(R, rng, 4, 2), rand_poly(R, rng, 3, 2)});
        const auto& gb = I.groebner_basis();
        for (std::size_t i = 0; i < gb.size(); ++i) {
            CHECK(gb[i].leading_coeff() == 1);
            if (i + 1 < gb.size())
                CHECK(R->compare(gb[i].leading_monomial(), gb[i + 1].leading_monomial()) < 0);
            for (std::size_t j = 0; j < gb.size(); ++j) {
                if (i == j) continue;
                for (const auto& t : gb[i].terms())
                    CHECK(!mono_divides(gb[j].leading_monomial(), t.mono));
            }
        }
    }
}

TEST_CASE("identical input yields byte-identical bases") {
    auto R = make_ring({"x", "y", "z"});
    Ideal I1 = ideal_of(R, {"x^2 + y*z - 2", "x*z - y^2 + 1", "y*x - z^2"});
    Ideal I2 = ideal_of(R, {"x^2 + y*z - 2", "x*z - y^2 + 1", "y*x - z^2"});
    const auto& a = I1.groebner_basis();
    const auto& b = I2.groebner_basis();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(format_polynomial(a[i]) == format_polynomial(b[i]));
}

TEST_CASE("multi-prime lift agrees with the all-rational engine") {
    auto R = make_ring({"x", "y", "z"});
    Rng rng(20240817);
    GBOptions exact;
    exact.modular = false;
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<Polynomial> gens;
        int ng = 2 + static_cast<int>(rng.uniform(0, 1));
        for (int g = 0; g < ng; ++g) gens.push_back(rand_poly(R, rng, 3, 3));
        auto lifted = buchberger(R, gens);
        auto plain = buchberger(R, gens, exact);
        REQUIRE(lifted.size() == plain.size());
        for (std::size_t i = 0; i < lifted.size(); ++i) CHECK(lifted[i] == plain[i]);
    }
    // fractional input coefficients round-trip through the residue fields
    std::vector<Polynomial> fr = {parse_polynomial(R, "1/2*x^2 - 3/7*y"),
                                  parse_polynomial(R, "x*y + 5/11*z^2"),
                                  parse_polynomial(R, "y^3 - 2/3*x")};
    auto lifted = buchberger(R, fr);
    auto plain = buchberger(R, fr, exact);
    REQUIRE(lifted.size() == plain.size());
    for (std::size_t i = 0; i < lifted.size(); ++i) CHECK(lifted[i] == plain[i]);
}

TEST_CASE("normal form is canonical modulo the ideal") {
    auto R = make_ring({"x", "y"});
    Ideal I = ideal_of(R, {"x*y - 1", "y^2 - 1"});
    Rng rng(7);
    for (int iter = 0; iter < 25; ++iter) {
        Polynomial f = rand_poly(R, rng, 5, 3);
        Polynomial shifted = f + rand_poly(R, rng, 3, 2) * I.generators()[0] +
                             rand_poly(R, rng, 3, 2) * I.generators()[1];
        CHECK(normal_form(f, I) == normal_form(shifted, I));
    }
    CHECK(normal_form(parse_polynomial(R, "x*y"), I) == parse_polynomial(R, "1"));
}

TEST_CASE("elimination drops the requested variables") {
    auto R = make_ring({"x", "y"});
    Ideal I = ideal_of(R, {"x*y - 1", "y^2 - 1"});
    Ideal E = eliminate(I, {1});
    REQUIRE(E.ring()->nvars() == 1);
    REQUIRE(E.ring()->var_name(0) == "x");
    const auto& gb = E.groebner_basis();
    REQUIRE(gb.size() == 1);
    CHECK(gb[0] == parse_polynomial(E.ring(), "x^2 - 1"));
}

TEST_CASE("implicitization of the one-parameter square family") {
    auto R = make_ring({"s", "p0", "p1", "p2"});
    Ideal I = ideal_of(R, {"p0 - (1 - s)^2", "p1 - 2*s*(1 - s)", "p2 - s^2"});
    Ideal E = eliminate(I, {0});
    auto P = E.ring();
    Ideal expected = Ideal(P, {parse_polynomial(P, "p1^2 - 4*p0*p2"), parse_polynomial(P, "p0 + p1 + p2 - 1")});
    CHECK(ideal_equal(E, expected));
}

TEST_CASE("ideal quotients match hand computations") {
    auto R = make_ring({"x", "y"});
    Ideal I = ideal_of(R, {"x*y", "y^2"});
    Ideal Q = ideal_quotient(I, parse_polynomial(R, "y"));
    CHECK(ideal_equal(Q, ideal_of(R, {"x", "y"})));

    Ideal J = ideal_of(R, {"x^2*y"});
    CHECK(ideal_equal(ideal_quotient(J, parse_polynomial(R, "y")), ideal_of(R, {"x^2"})));
    CHECK(ideal_equal(ideal_quotient(J, parse_polynomial(R, "x + y")), J)); // non zero-divisor
    CHECK(ideal_equal(ideal_quotient(J, parse_polynomial(R, "7")), J));
}

TEST_CASE("saturation reaches its fixpoint") {
    auto R = make_ring({"x", "y"});
    Ideal I = ideal_of(R, {"x^2*y", "x*y^2"});
    Polynomial f = parse_polynomial(R, "x*y");
    Ideal S = saturate(I, f);
    CHECK(is_unit_ideal(S));

    Ideal J = ideal_of(R, {"x^2*y"});
    Ideal Sy = saturate(J, parse_polynomial(R, "y"));
    CHECK(ideal_equal(Sy, ideal_of(R, {"x^2"})));
    CHECK(ideal_equal(saturate(Sy, parse_polynomial(R, "y")), Sy)); // fixpoint

    // Containment chain I <= (I : f) <= (I : f^inf).
    Ideal Q = ideal_quotient(J, parse_polynomial(R, "y"));
    for (const auto& g : J.generators()) CHECK(ideal_contains(Q, g));
    for (const auto& g : Q.generators()) CHECK(ideal_contains(Sy, g));
}

TEST_CASE("dimension and codimension from independent sets") {
    auto R3 = make_ring({"x", "y", "z"});
    CHECK(dimension_codim(ideal_of(R3, {"x"})).dimension == 2);
    CHECK(dimension_codim(ideal_of(R3, {"x", "y"})).dimension == 1);
    CHECK(dimension_codim(ideal_of(R3, {"x", "y", "z"})).dimension == 0);
    CHECK(dimension_codim(Ideal(R3, {})).dimension == 3);
    CHECK(dimension_codim(ideal_of(R3, {"x*y - 1"})).codimension == 1);

    auto RC = make_ring({"p0", "p1", "p2"});
    Ideal circle = ideal_of(RC, {"p0^2 + p1^2 + p2^2 - 2*p0*p1 - 2*p0*p2 - 2*p1*p2"});
    DimResult d = dimension_codim(circle);
    CHECK(d.dimension == 2); // affine cone over a projective conic
    CHECK(d.codimension == 1);

    CHECK_THROWS_AS(dimension_codim(ideal_of(R3, {"x", "x + 1"})), UnitIdealError);
}

TEST_CASE("colength counts standard monomials") {
    auto R1 = make_ring({"x"});
    CHECK(colength(ideal_of(R1, {"x^2 - 3*x + 2"})) == 2);

    auto R2 = make_ring({"x", "y"});
    Ideal I = ideal_of(R2, {"x^2", "x*y", "y^2"});
    CHECK(colength(I) == 3);
    auto sm = standard_monomials(I);
    REQUIRE(sm.size() == 3);
    CHECK(sm[0] == Monomial::one());

    CHECK(colength(ideal_of(R2, {"x^2 + 1", "y - x"})) == 2);
    CHECK(colength(ideal_of(R2, {"x", "x + 1"})) == 0); // unit ideal
    CHECK_THROWS_AS(colength(ideal_of(R2, {"x"})), DimensionError);
}

TEST_CASE("colength is invariant under variable relabeling") {
    auto R = make_ring({"x", "y", "z"});
    Ideal I = ideal_of(R, {"x^2 + y - 1", "y^2 - z", "z^3 - x"});
    long base = colength(I);
    CHECK(base > 0);
    // Send (x, y, z) -> (z, x, y) and recompute in the relabeled ring.
    auto S = make_ring({"x", "y", "z"});
    std::vector<int> map{2, 0, 1};
    std::vector<Polynomial> permuted;
    for (const auto& g : I.generators()) permuted.push_back(g.map_vars(S, map));
    CHECK(colength(Ideal(S, permuted)) == base);
}

TEST_CASE("exact division") {
    auto R = make_ring({"x", "y"});
    CHECK(exact_divide(parse_polynomial(R, "x^2 - y^2"), parse_polynomial(R, "x - y")) ==
          parse_polynomial(R, "x + y"));
    CHECK_THROWS_AS(exact_divide(parse_polynomial(R, "x^2 + 1"), parse_polynomial(R, "x")), UsageError);
}

TEST_CASE("deadline aborts long computations") {
    auto R = make_ring({"x", "y"});
    Ideal I = ideal_of(R, {"x*y - 1", "y^2 - 1"});
    GBOptions opts;
    opts.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    opts.stage = "unit test";
    CHECK_THROWS_AS(I.groebner_basis(opts), ComputationTimeout);
}

TEST_SUITE_END();
