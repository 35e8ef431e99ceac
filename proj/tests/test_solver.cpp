#include <doctest.h>

#include "mlcrit/errors.hpp"
#include "mlcrit/likelihood.hpp"
#include "mlcrit/parser.hpp"
#include "mlcrit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace mlcrit;

namespace {

// Independent univariate root oracle (Durand-Kerner iteration), used to
// cross-check the eigenvalue solver on eliminated ideals.
std::vector<cd> univariate_roots(std::vector<double> coeffs) {
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    int deg = static_cast<int>(coeffs.size()) - 1;
    REQUIRE(deg >= 1);
    for (double& c : coeffs) c /= coeffs[static_cast<std::size_t>(deg)];
    auto eval = [&](cd x) {
        cd acc(0.0, 0.0);
        for (int i = deg; i >= 0; --i) acc = acc * x + coeffs[static_cast<std::size_t>(i)];
        return acc;
    };
    std::vector<cd> roots(static_cast<std::size_t>(deg));
    cd w(0.4, 0.9);
    cd p(1.0, 0.0);
    for (auto& r : roots) {
        p *= w;
        r = p;
    }
    for (int iter = 0; iter < 200; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            cd denom(1.0, 0.0);
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
            cd delta = eval(roots[static_cast<std::size_t>(i)]) / denom;
            roots[static_cast<std::size_t>(i)] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return roots;
}

std::vector<double> univariate_coeffs(const Polynomial& f, int var) {
    std::vector<double> c(static_cast<std::size_t>(f.total_degree()) + 1, 0.0);
    for (const Term& t : f.terms()) {
        REQUIRE(t.mono.degree == t.mono[var]); // truly univariate in `var`
        c[t.mono[var]] = to_double(t.coeff);
    }
    return c;
}

} // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("two points of a univariate quadric") {
    auto R = make_ring({"x"});
    Ideal I(R, {parse_polynomial(R, "x^2 - 1")});
    SolveResult s = solve_zero_dim(I, 7);

    REQUIRE(s.points.size() == 2);
    CHECK(s.total_multiplicity == 2);
    CHECK(s.all_certified);
    CHECK(s.separating_retries == 0);
    CHECK(s.points[0].coords[0].real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(s.points[1].coords[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& pt : s.points) {
        CHECK(pt.residual <= 1e-8);
        CHECK(pt.is_real);
        CHECK(pt.multiplicity == 1);
    }
    CHECK_FALSE(s.points[0].is_positive);
    CHECK(s.points[1].is_positive);

    Classification c = classify_points(s.points);
    CHECK(c.complex_points.empty());
    CHECK(c.real_points == std::vector<int>{0});
    CHECK(c.positive_points == std::vector<int>{1});
}

TEST_CASE("three variables with a linear slice") {
    auto R = make_ring({"x", "y", "z"});
    Ideal I(R, {parse_polynomial(R, "x^2 - 1"), parse_polynomial(R, "y - 1"),
                parse_polynomial(R, "x + y + z - 1")});
    SolveResult s = solve_zero_dim(I, 11);

    REQUIRE(s.points.size() == 2);
    CHECK(s.total_multiplicity == 2);
    CHECK(s.all_certified);
    // sorted by real parts: (-1, 1, 1) before (1, 1, -1)
    CHECK(std::abs(s.points[0].coords[0] - cd(-1, 0)) <= 1e-9);
    CHECK(std::abs(s.points[0].coords[1] - cd(1, 0)) <= 1e-9);
    CHECK(std::abs(s.points[0].coords[2] - cd(1, 0)) <= 1e-9);
    CHECK(std::abs(s.points[1].coords[0] - cd(1, 0)) <= 1e-9);
    CHECK(std::abs(s.points[1].coords[2] - cd(-1, 0)) <= 1e-9);
    for (const auto& pt : s.points) {
        CHECK(pt.is_real);
        CHECK_FALSE(pt.is_positive); // each point has a negative coordinate
        cd sum(0, 0);
        for (const cd& c : pt.coords) sum += c;
        CHECK(std::abs(sum - cd(1, 0)) <= 1e-10);
    }
}

TEST_CASE("conjugate pair closure") {
    auto R = make_ring({"x"});
    Ideal I(R, {parse_polynomial(R, "x^2 + 1")});
    SolveResult s = solve_zero_dim(I, 3);

    REQUIRE(s.points.size() == 2);
    CHECK_FALSE(s.points[0].is_real);
    CHECK_FALSE(s.points[1].is_real);
    CHECK(std::abs(s.points[0].coords[0] - std::conj(s.points[1].coords[0])) <= 1e-9);
    CHECK(s.points[0].coords[0].imag() * s.points[1].coords[0].imag() < 0.0);

    Classification c = classify_points(s.points);
    CHECK(c.complex_points.size() == 2);
    CHECK(c.real_points.empty());
    CHECK(c.positive_points.empty());
}

TEST_CASE("double root reported as one point with multiplicity") {
    auto R = make_ring({"x"});
    // (x - 2)^2 (x + 1) = x^3 - 3x^2 + 4
    Ideal I(R, {parse_polynomial(R, "x^3 - 3*x^2 + 4")});
    SolveResult s = solve_zero_dim(I, 5);

    REQUIRE(s.points.size() == 2);
    CHECK(s.total_multiplicity == 3);
    CHECK(s.points[0].coords[0].real() == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(s.points[0].multiplicity == 1);
    CHECK(s.points[1].coords[0].real() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(s.points[1].multiplicity == 2);
    CHECK(s.all_certified);
    // every separating form keeps the double eigenvalue, so the retries run out
    CHECK(s.separating_retries == 5);
    REQUIRE_FALSE(s.warnings.empty());
    CHECK(s.warnings[0].find("cluster") != std::string::npos);
}

TEST_CASE("circle critical points match the eliminated cubic") {
    auto R = make_ring({"p0", "p1", "p2"});
    ImplicitModel model = make_implicit_model(
        R, {parse_polynomial(R, "p0^2 + p1^2 + p2^2 - 2*p0*p1 - 2*p0*p2 - 2*p1*p2")});
    auto res = likelihood_ideal(model, make_data_vector({1, 2, 3}, 3));
    REQUIRE(res.colength == 3);

    SolveResult s = solve_zero_dim(res.chart, 42);
    REQUIRE(s.points.size() == 3);
    CHECK(s.total_multiplicity == 3);
    CHECK(s.all_certified);
    for (const auto& pt : s.points) {
        CHECK(pt.is_real);
        cd sum(0, 0);
        for (const cd& c : pt.coords) sum += c;
        CHECK(std::abs(sum - cd(1, 0)) <= 1e-10);
    }

    // Independent cross-check: eliminate down to p2 and root-solve that cubic.
    Ideal uni = eliminate(res.chart, {0, 1}); // lands in the one-variable ring {p2}
    REQUIRE(uni.generators().size() == 1);
    std::vector<cd> roots = univariate_roots(univariate_coeffs(uni.generators()[0], 0));
    REQUIRE(roots.size() == 3);
    for (const cd& r : roots) {
        int hits = 0;
        for (const auto& pt : s.points)
            if (std::abs(pt.coords[2] - r) <= 1e-6 * (1.0 + std::abs(r))) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("same seed reproduces bitwise, different seed agrees to tolerance") {
    auto R = make_ring({"p0", "p1", "p2"});
    ImplicitModel model = make_implicit_model(
        R, {parse_polynomial(R, "p0^2 + p1^2 + p2^2 - 2*p0*p1 - 2*p0*p2 - 2*p1*p2")});
    auto res = likelihood_ideal(model, make_data_vector({1, 2, 3}, 3));

    SolveResult a = solve_zero_dim(res.chart, 42);
    SolveResult b = solve_zero_dim(res.chart, 42);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        for (std::size_t j = 0; j < a.points[i].coords.size(); ++j) {
            CHECK(a.points[i].coords[j].real() == b.points[i].coords[j].real());
            CHECK(a.points[i].coords[j].imag() == b.points[i].coords[j].imag());
        }

    SolveResult c = solve_zero_dim(res.chart, 20240814);
    REQUIRE(c.points.size() == a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        for (std::size_t j = 0; j < a.points[i].coords.size(); ++j)
            CHECK(std::abs(a.points[i].coords[j] - c.points[i].coords[j]) <= 1e-7);
}

TEST_CASE("borderline coordinates are flagged") {
    auto R = make_ring({"x"});
    // roots +- 1e-7 i, right at the realness cutoff
    Ideal I(R, {parse_polynomial(R, "x^2 + 1/100000000000000")});
    SolveResult s = solve_zero_dim(I, 9);

    REQUIRE(s.points.size() == 2);
    for (const auto& pt : s.points) {
        CHECK(std::abs(std::abs(pt.coords[0].imag()) - 1e-7) <= 1e-9);
        CHECK(pt.borderline);
        CHECK_FALSE(pt.is_positive);
    }
    bool warned = false;
    for (const auto& w : s.warnings)
        if (w.find("classification tolerance") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("unit ideal yields no points") {
    auto R = make_ring({"x", "y"});
    Ideal I(R, {parse_polynomial(R, "x"), parse_polynomial(R, "x - 1")});
    SolveResult s = solve_zero_dim(I, 1);
    CHECK(s.points.empty());
    CHECK(s.total_multiplicity == 0);
    CHECK(s.all_certified);
}

TEST_CASE("positive-dimensional input is rejected") {
    auto R = make_ring({"x", "y"});
    Ideal I(R, {parse_polynomial(R, "x*y")});
    CHECK_THROWS_AS(solve_zero_dim(I, 1), DimensionError);
}

TEST_CASE("non-basis variable coordinates are recovered") {
    auto R = make_ring({"y", "x"}, MonomialOrder::lex());
    // under lex with y > x the monomial y is a lead, so y falls out of the basis
    Ideal I(R, {parse_polynomial(R, "y - x^2"), parse_polynomial(R, "x^3 - 8")});
    SolveResult s = solve_zero_dim(I, 13);
    REQUIRE(s.points.size() == 3);
    CHECK(s.total_multiplicity == 3);
    CHECK(s.all_certified);
    for (const auto& pt : s.points) {
        CHECK(std::abs(pt.coords[0] - pt.coords[1] * pt.coords[1]) <= 1e-7);
        CHECK(std::abs(pt.coords[1] * pt.coords[1] * pt.coords[1] - cd(8, 0)) <= 1e-7);
    }
    Classification c = classify_points(s.points);
    CHECK(c.positive_points.size() == 1); // the real cube root (2, 4)
    CHECK(c.complex_points.size() == 2);
}

TEST_SUITE_END();
