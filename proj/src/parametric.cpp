#include "mlcrit/parametric.hpp"

#include "mlcrit/errors.hpp"
#include "mlcrit/rng.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace mlcrit {

namespace {

// Distinct nonzero primitive parts, in ascending total degree.
std::vector<Polynomial> cleaned(std::vector<Polynomial> polys) {
    std::map<std::string, Polynomial> unique;
    for (Polynomial& f : polys) {
        if (f.is_zero()) continue;
        Polynomial p = f.primitive_part();
        unique.emplace(format_polynomial(p), std::move(p));
    }
    std::vector<Polynomial> out;
    out.reserve(unique.size());
    for (auto& [key, p] : unique) out.push_back(std::move(p));
    std::stable_sort(out.begin(), out.end(),
                     [](const Polynomial& a, const Polynomial& b) { return a.total_degree() < b.total_degree(); });
    return out;
}

} // namespace

ParametricModel make_parametric_model(const RingPtr& ring, std::vector<Polynomial> coords) {
    if (coords.size() < 2) throw UsageError("a parametric model needs at least two coordinates");
    Polynomial sum = Polynomial::zero(ring);
    for (const Polynomial& f : coords) {
        if (f.is_zero()) throw UsageError("parametric coordinates must be nonzero");
        if (!f.ring()->same_as(*ring)) throw UsageError("parametric coordinate lives in a different ring");
        sum = sum + f;
    }
    if (sum != Polynomial::constant(ring, Rat(1)))
        throw UsageError("parametric coordinates must sum to 1 identically");
    ParametricModel model;
    model.ring = ring;
    model.coords = std::move(coords);
    return model;
}

PolyMatrix build_param_matrix(const ParametricModel& model) {
    const int n1 = static_cast<int>(model.coords.size());
    const int d = model.ring->nvars();
    PolyMatrix M(model.ring, n1, n1 + d);
    for (int i = 0; i < n1; ++i) {
        M.at(i, i) = model.coords[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j)
            M.at(i, n1 + j) = model.coords[static_cast<std::size_t>(i)].differentiate(j);
    }
    return M;
}

PolyMatrix param_jacobian(const ParametricModel& model) {
    const int n1 = static_cast<int>(model.coords.size());
    const int d = model.ring->nvars();
    PolyMatrix Df(model.ring, n1, d);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < d; ++j)
            Df.at(i, j) = model.coords[static_cast<std::size_t>(i)].differentiate(j);
    return Df;
}

Ideal parametric_likelihood_ideal(const ParametricModel& model, const DataVector& u, const GBOptions& gb) {
    const std::size_t n1 = model.coords.size();
    if (u.u.size() != n1) throw UsageError("data vector length does not match the coordinate count");
    const int d = model.ring->nvars();

    // Score-equation numerators: clearing denominators from
    // sum_i u_i dlog(f_i)/dtheta_j gives
    //   D_j = sum_i u_i (prod_{k != i} f_k) df_i/dtheta_j.
    std::vector<Polynomial> prefix(n1 + 1, Polynomial::constant(model.ring, 1));
    std::vector<Polynomial> suffix(n1 + 1, Polynomial::constant(model.ring, 1));
    for (std::size_t i = 0; i < n1; ++i) prefix[i + 1] = prefix[i] * model.coords[i];
    for (std::size_t i = n1; i-- > 0;) suffix[i] = suffix[i + 1] * model.coords[i];
    std::vector<Polynomial> dnum;
    for (int j = 0; j < d; ++j) {
        Polynomial D = Polynomial::zero(model.ring);
        for (std::size_t i = 0; i < n1; ++i) {
            if (u.u[i] == 0) continue;
            D = D + (prefix[i] * suffix[i + 1] * model.coords[i].differentiate(j)).scaled(Rat(u.u[i]));
        }
        dnum.push_back(std::move(D));
    }
    dnum = cleaned(std::move(dnum));
    if (dnum.empty()) throw UsageError("the critical equations are identically zero for this data");

    // Saturating <D_1..D_d> by the coordinates would give the likelihood
    // ideal directly: every kernel vector (a, b) of [diag(f) | Df] satisfies
    //   (prod f_k) * sum_i u_i a_i = -sum_j b_j D_j,
    // and each D_j is sum_i u_i a_i for an explicit kernel vector, so the
    // two generating sets agree after saturation.  Feeding the degree-heavy
    // D_j in directly is expensive, though, so stage the work: first harvest
    // low-degree relations u.a from the kernel and saturate those (any subset
    // of the kernel is sound -- the result sits inside the likelihood ideal),
    // then adjoin the D_j reduced against that stage and saturate again.
    // Idempotence of saturation makes the staged result exact.
    int maxdeg = 0;
    for (const auto& f : model.coords) maxdeg = std::max(maxdeg, f.total_degree());
    PolyMatrix M = build_param_matrix(model);
    std::vector<PolyVector> kernel = kernel_elements_bounded(M, {}, 3 * maxdeg + 3, gb);
    std::vector<Polynomial> relations;
    for (const PolyVector& v : kernel) {
        Polynomial h = Polynomial::zero(model.ring);
        for (std::size_t i = 0; i < n1; ++i)
            if (u.u[i] != 0) h = h + v[i].scaled(Rat(u.u[i]));
        relations.push_back(std::move(h));
    }
    Ideal J(model.ring, cleaned(std::move(relations)));
    for (const Polynomial& f : model.coords) {
        if (is_unit_ideal(J, gb)) return J; // no critical points off this divisor
        J = saturate(J, f, gb.named("saturation by a model coordinate"));
    }

    if (is_unit_ideal(J, gb)) return J;
    std::vector<Polynomial> aug = J.generators();
    for (const Polynomial& D : dnum) aug.push_back(normal_form(D, J, gb));
    J = Ideal(model.ring, cleaned(std::move(aug)));
    for (const Polynomial& f : model.coords) {
        if (is_unit_ideal(J, gb)) return J;
        J = saturate(J, f, gb.named("saturation by a model coordinate"));
    }
    return J;
}

Ideal remove_singular_locus(const Ideal& j_u, const ParametricModel& model, const GBOptions& gb,
                            int* passes_changed) {
    if (passes_changed) *passes_changed = 0;
    std::vector<Polynomial> minors = cleaned(all_minors(param_jacobian(model), model.ring->nvars()));
    Ideal K = j_u;
    for (const Polynomial& q : minors) {
        if (is_unit_ideal(K, gb)) break;
        if (normal_form(q, K, gb).is_zero()) continue; // q vanishes on the whole critical set
        Ideal S = saturate(K, q, gb.named("saturation by a singular minor"));
        if (is_unit_ideal(S, gb)) continue; // the factor would wipe out everything: skip it
        if (passes_changed && !ideal_equal(S, K, gb)) ++*passes_changed;
        K = std::move(S);
    }
    return K;
}

ParametricResult parametric_likelihood(const ParametricModel& model, const DataVector& u, const GBOptions& gb) {
    ParametricResult res;
    res.j_u = parametric_likelihood_ideal(model, u, gb);
    res.k_u = remove_singular_locus(res.j_u, model, gb, &res.extraneous_passes);
    if (is_unit_ideal(res.k_u, gb)) {
        res.dimension = -1;
        res.colength = 0;
        return res;
    }
    DimResult d = dimension_codim(res.k_u, gb);
    res.dimension = d.dimension;
    res.colength = d.dimension == 0 ? colength(res.k_u, gb) : -1;
    return res;
}

ConsistencyReport parametric_ml_consistency(const ParametricModel& model, std::uint64_t seed,
                                            const GBOptions& gb) {
    if (!model.implicit_link)
        throw UsageError("the consistency check needs the implicit model and its fiber degree");

    Rng rng(seed);
    std::vector<Int> counts;
    counts.reserve(model.coords.size());
    for (std::size_t i = 0; i < model.coords.size(); ++i)
        counts.push_back(Int(static_cast<unsigned long>(rng.uniform(1, 10007))));
    DataVector u = make_data_vector(std::move(counts), static_cast<int>(model.coords.size()));

    ParametricResult par = parametric_likelihood(model, u, gb);
    if (par.colength < 0)
        throw ToleranceError("K_u is not zero-dimensional at the drawn data; cannot compare colengths");

    LikelihoodOptions lopts;
    lopts.gb = gb;
    MLDegreeResult ml = ml_degree(*model.implicit_link, rng.uniform(1, ~std::uint64_t{0} - 1), lopts);

    ConsistencyReport rep;
    rep.colength = par.colength;
    rep.ml_degree = ml.degree;
    rep.fiber_degree = model.fiber_degree;
    rep.ml_certified = ml.certified;
    if (rep.colength != rep.fiber_degree * rep.ml_degree) {
        std::ostringstream msg;
        msg << "parametric/implicit mismatch: colength(K_u) = " << rep.colength << " but delta * ML degree = "
            << rep.fiber_degree << " * " << rep.ml_degree << " = " << rep.fiber_degree * rep.ml_degree;
        throw ToleranceError(msg.str());
    }
    return rep;
}

} // namespace mlcrit
