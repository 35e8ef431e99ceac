#include <doctest.h>

#include "mlcrit/certify.hpp"
#include "mlcrit/errors.hpp"
#include "mlcrit/parametric.hpp"
#include "mlcrit/parser.hpp"
#include "mlcrit/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace mlcrit;

namespace {

ParametricModel bernoulli_model() {
    auto R = make_ring({"t"});
    ParametricModel m = make_parametric_model(R, {parse_polynomial(R, "1 - t"), parse_polynomial(R, "t")});
    auto P = make_ring({"p0", "p1"});
    m.implicit_link = make_implicit_model(P, {});
    m.fiber_degree = 1;
    return m;
}

ParametricModel hardy_weinberg_param() {
    auto R = make_ring({"s"});
    ParametricModel m = make_parametric_model(
        R, {parse_polynomial(R, "(1-s)^2"), parse_polynomial(R, "2*s*(1-s)"), parse_polynomial(R, "s^2")});
    auto P = make_ring({"p0", "p1", "p2"});
    m.implicit_link = make_implicit_model(P, {parse_polynomial(P, "p1^2 - 4*p0*p2")});
    m.fiber_degree = 1;
    return m;
}

ParametricModel coin_param() {
    auto R = make_ring({"pi", "s", "t"});
    std::vector<std::string> f = {
        "pi*(1-s)^4 + (1-pi)*(1-t)^4",
        "4*pi*s*(1-s)^3 + 4*(1-pi)*t*(1-t)^3",
        "6*pi*s^2*(1-s)^2 + 6*(1-pi)*t^2*(1-t)^2",
        "4*pi*s^3*(1-s) + 4*(1-pi)*t^3*(1-t)",
        "pi*s^4 + (1-pi)*t^4",
    };
    std::vector<Polynomial> coords;
    for (const auto& txt : f) coords.push_back(parse_polynomial(R, txt));
    return make_parametric_model(R, std::move(coords));
}

} // namespace

TEST_SUITE_BEGIN("parametric");

TEST_CASE("construction validates the simplex identity") {
    auto R = make_ring({"t"});
    CHECK_THROWS_AS(make_parametric_model(R, {parse_polynomial(R, "t"), parse_polynomial(R, "t")}),
                    UsageError);
    CHECK_THROWS_AS(make_parametric_model(R, {parse_polynomial(R, "1 - t")}), UsageError);
    CHECK_NOTHROW(make_parametric_model(R, {parse_polynomial(R, "1 - t"), parse_polynomial(R, "t")}));
}

TEST_CASE("Bernoulli model matrix has the textbook shape") {
    ParametricModel m = bernoulli_model();
    PolyMatrix M = build_param_matrix(m);
    REQUIRE(M.rows == 2);
    REQUIRE(M.cols == 3);
    auto R = m.ring;
    CHECK(M.at(0, 0) == parse_polynomial(R, "1 - t"));
    CHECK(M.at(0, 1).is_zero());
    CHECK(M.at(0, 2) == parse_polynomial(R, "-1"));
    CHECK(M.at(1, 0).is_zero());
    CHECK(M.at(1, 1) == parse_polynomial(R, "t"));
    CHECK(M.at(1, 2) == parse_polynomial(R, "1"));
}

TEST_CASE("derivative block columns sum to zero") {
    ParametricModel m = coin_param();
    PolyMatrix M = build_param_matrix(m);
    int n1 = static_cast<int>(m.coords.size());
    REQUIRE(M.rows == 5);
    REQUIRE(M.cols == 8);
    for (int j = n1; j < M.cols; ++j) {
        Polynomial sum = Polynomial::zero(m.ring);
        for (int i = 0; i < M.rows; ++i) sum = sum + M.at(i, j);
        CHECK(sum.is_zero());
    }
}

TEST_CASE("Bernoulli MLE comes out in closed form") {
    ParametricModel m = bernoulli_model();
    DataVector u = make_data_vector({3, 5}, 2);
    ParametricResult res = parametric_likelihood(m, u);

    Ideal expected(m.ring, {parse_polynomial(m.ring, "8*t - 5")});
    CHECK(ideal_equal(res.j_u, expected));
    CHECK(ideal_equal(res.k_u, expected)); // the map is an embedding; nothing removed
    CHECK(res.extraneous_passes == 0);
    CHECK(res.dimension == 0);
    CHECK(res.colength == 1);

    ConsistencyReport rep = parametric_ml_consistency(m, 20240814);
    CHECK(rep.colength == 1);
    CHECK(rep.ml_degree == 1);
    CHECK(rep.fiber_degree == 1);
}

TEST_CASE("Hardy-Weinberg parametrization agrees with the implicit route") {
    ParametricModel m = hardy_weinberg_param();
    DataVector u = make_data_vector({11, 17, 23}, 3);
    ParametricResult res = parametric_likelihood(m, u);
    REQUIRE(res.colength == 1);

    // the critical-equation numerators lie in J_u
    Polynomial numerator = Polynomial::zero(m.ring);
    for (std::size_t i = 0; i < m.coords.size(); ++i) {
        Polynomial prod = m.coords[i].differentiate(0).scaled(Rat(u.u[i]));
        for (std::size_t k = 0; k < m.coords.size(); ++k)
            if (k != i) prod = prod * m.coords[k];
        numerator = numerator + prod;
    }
    CHECK(ideal_contains(res.j_u, numerator));

    // J_u is inside K_u
    for (const Polynomial& g : res.j_u.generators()) CHECK(ideal_contains(res.k_u, g));

    // the K_u solution pushes forward onto the implicit critical point
    SolveResult sol = solve_zero_dim(res.k_u, 4);
    REQUIRE(sol.points.size() == 1);
    REQUIRE(sol.points[0].is_real);
    double s = sol.points[0].coords[0].real();
    std::vector<double> p;
    for (const Polynomial& f : m.coords) p.push_back(f.evaluate(std::vector<double>{s}));

    auto implicit_res = likelihood_ideal(*m.implicit_link, u);
    for (const Polynomial& g : implicit_res.chart.generators())
        CHECK(std::abs(g.evaluate(p)) <= 1e-6 * (1.0 + g.coeff_one_norm()));

    ConsistencyReport rep = parametric_ml_consistency(m, 7);
    CHECK(rep.colength == 1);
    CHECK(rep.ml_degree == 1);

    // a wrong fiber degree is loudly rejected
    ParametricModel wrong = m;
    wrong.fiber_degree = 3;
    CHECK_THROWS_AS(parametric_ml_consistency(wrong, 7), ToleranceError);
}

TEST_CASE("coin mixture: J_u is positive-dimensional but K_u is artinian") {
    ParametricModel m = coin_param();
    DataVector u = make_data_vector({51, 18, 73, 25, 75}, 5);
    ParametricResult res = parametric_likelihood(m, u);

    // the unmixed-Bernoulli curve survives in J_u: substituting
    // s = t = (u1 + 2u2 + 3u3 + 4u4) / (4N) = 49/88 kills every generator
    CHECK(dimension_codim(res.j_u).dimension >= 1);
    Rat uhat(49, 88);
    for (const Polynomial& g : res.j_u.generators())
        CHECK(g.substitute(1, uhat).substitute(2, uhat).is_zero());

    CHECK(res.dimension == 0);
    CHECK(res.colength == 24);
    CHECK(res.extraneous_passes >= 1);
    for (const Polynomial& g : res.j_u.generators()) CHECK(ideal_contains(res.k_u, g));
}

TEST_SUITE_END();
