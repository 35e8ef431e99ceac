#include "mlcrit/likelihood.hpp"

#include "mlcrit/errors.hpp"
#include "mlcrit/rng.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace mlcrit {

namespace {

Polynomial sum_of_vars(const RingPtr& ring) {
    std::vector<Term> terms;
    for (int i = 0; i < ring->nvars(); ++i) terms.push_back({Rat(1), Monomial::var(i)});
    return Polynomial::from_terms(ring, std::move(terms));
}

Polynomial simplex_constraint(const RingPtr& ring) {
    return sum_of_vars(ring) - Polynomial::constant(ring, 1);
}

bool is_complete_intersection(const ImplicitModel& model) {
    return model.codim == static_cast<int>(model.generators.size());
}

Strategy resolve_strategy(const ImplicitModel& model, Strategy s) {
    if (s != Strategy::Auto) return s;
    return is_complete_intersection(model) ? Strategy::Minors : Strategy::Syzygy;
}

// Distinct random k-subset of {0..limit-1}, returned sorted.
std::vector<int> random_subset(Rng& rng, int limit, int k) {
    std::set<int> pick;
    while (static_cast<int>(pick.size()) < k)
        pick.insert(static_cast<int>(rng.uniform(0, static_cast<std::uint64_t>(limit - 1))));
    return {pick.begin(), pick.end()};
}

} // namespace

Int DataVector::total() const {
    Int t = 0;
    for (const Int& v : u) t += v;
    return t;
}

DataVector make_data_vector(std::vector<Int> u, int expected_length) {
    if (static_cast<int>(u.size()) != expected_length)
        throw UsageError("data vector has " + std::to_string(u.size()) + " entries, model has " +
                         std::to_string(expected_length) + " states");
    Int total = 0;
    for (const Int& v : u) {
        if (v < 0) throw UsageError("data counts must be non-negative");
        total += v;
    }
    if (total == 0) throw UsageError("data vector must have a positive total");
    return DataVector{std::move(u)};
}

ImplicitModel make_implicit_model(const RingPtr& ring, std::vector<Polynomial> generators,
                                  const GBOptions& opts) {
    ImplicitModel model;
    model.ring = ring;
    for (const Polynomial& g : generators) {
        if (g.is_zero()) throw UsageError("model generators must be nonzero");
        if (!g.is_homogeneous())
            throw UsageError("model generator is not homogeneous: " + format_polynomial(g));
        model.degrees.push_back(g.total_degree());
    }
    model.generators = std::move(generators);
    Ideal P(ring, model.generators);
    if (is_unit_ideal(P, opts)) throw UsageError("model ideal is the unit ideal");
    model.codim = dimension_codim(P, opts.named("model codimension")).codimension;
    return model;
}

std::pair<PolyMatrix, PolyMatrix> build_augmented_jacobian(const ImplicitModel& model) {
    const RingPtr& ring = model.ring;
    const int n1 = ring->nvars();
    const int r = static_cast<int>(model.generators.size());
    PolyMatrix J(ring, r + 1, n1);
    for (int j = 0; j < n1; ++j) J.at(0, j) = Polynomial::constant(ring, 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n1; ++j) J.at(i + 1, j) = model.generators[static_cast<std::size_t>(i)].differentiate(j);
    PolyMatrix Jt(ring, r + 1, n1);
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j < n1; ++j) Jt.at(i, j) = J.at(i, j) * Polynomial::variable(ring, j);
    return {std::move(J), std::move(Jt)};
}

std::vector<Polynomial> singular_minors(const ImplicitModel& model) {
    const RingPtr& ring = model.ring;
    const int r = static_cast<int>(model.generators.size());
    const int c = model.codim;
    if (c == 0 || c > r || c > ring->nvars()) return {};
    PolyMatrix Jac(ring, r, ring->nvars());
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < ring->nvars(); ++j)
            Jac.at(i, j) = model.generators[static_cast<std::size_t>(i)].differentiate(j);
    std::vector<Polynomial> minors = all_minors(Jac, c);
    std::map<std::string, Polynomial> distinct;
    for (Polynomial& m : minors) {
        if (m.is_zero()) continue;
        Polynomial p = m.primitive_part();
        distinct.emplace(format_polynomial(p), std::move(p));
    }
    std::vector<Polynomial> out;
    out.reserve(distinct.size());
    for (auto& [key, p] : distinct) out.push_back(std::move(p));
    std::stable_sort(out.begin(), out.end(),
                     [](const Polynomial& a, const Polynomial& b) { return a.total_degree() < b.total_degree(); });
    return out;
}

Ideal singular_locus_ideal(const ImplicitModel& model) {
    std::vector<Polynomial> gens = singular_minors(model);
    gens.insert(gens.end(), model.generators.begin(), model.generators.end());
    return Ideal(model.ring, std::move(gens));
}

LikelihoodPrep prepare_likelihood(const ImplicitModel& model, const LikelihoodOptions& opts) {
    LikelihoodPrep prep;
    prep.q_minors = singular_minors(model);
    if (resolve_strategy(model, opts.strategy) == Strategy::Syzygy) {
        auto [J, Jt] = build_augmented_jacobian(model);
        prep.kernel = kernel_of_matrix(Jt, model.generators, opts.gb.named("jacobian kernel"));
        prep.kernel_computed = true;
        if (opts.presaturate_module) {
            std::vector<Polynomial> factors;
            for (int i = 0; i < model.ring->nvars(); ++i)
                factors.push_back(Polynomial::variable(model.ring, i));
            factors.insert(factors.end(), prep.q_minors.begin(), prep.q_minors.end());
            prep.kernel = presaturate_kernel(model.ring, prep.kernel, factors,
                                             opts.gb.named("kernel presaturation"));
            prep.kernel_presaturated = true;
        }
    }
    return prep;
}

namespace {

std::vector<Polynomial> critical_generators(const ImplicitModel& model, const DataVector& u,
                                            Strategy strategy, const LikelihoodPrep& prep) {
    const RingPtr& ring = model.ring;
    std::vector<Polynomial> gens = model.generators;
    if (strategy == Strategy::Syzygy) {
        for (const PolyVector& phi : prep.kernel) {
            Polynomial f = Polynomial::zero(ring);
            for (int i = 0; i < ring->nvars(); ++i)
                f = f + phi[static_cast<std::size_t>(i)].scaled(Rat(u.u[static_cast<std::size_t>(i)]));
            if (!f.is_zero()) gens.push_back(f.primitive_part());
        }
        return gens;
    }
    const int r = static_cast<int>(model.generators.size());
    const int c = model.codim;
    const int n1 = ring->nvars();
    if (c + 2 > r + 2 || c + 2 > n1)
        throw UsageError("minors strategy needs c + 2 <= number of states; use the syzygy strategy");
    PolyMatrix Jt = build_augmented_jacobian(model).second;
    PolyMatrix B(ring, r + 2, n1);
    for (int j = 0; j < n1; ++j) B.at(0, j) = Polynomial::constant(ring, Rat(u.u[static_cast<std::size_t>(j)]));
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j < n1; ++j) B.at(i + 1, j) = Jt.at(i, j);
    std::set<std::string> seen;
    for (Polynomial& m : all_minors(B, c + 2)) {
        if (m.is_zero()) continue;
        Polynomial p = m.primitive_part();
        if (seen.insert(format_polynomial(p)).second) gens.push_back(std::move(p));
    }
    return gens;
}

// Saturate by each factor in turn. Factors beyond index `hard_count` cut the
// singular locus; when saturating by one of those collapses the ideal to the
// whole ring, that factor vanishes on the critical scheme and is skipped.
Ideal saturate_all(Ideal I, const std::vector<Polynomial>& factors, std::size_t hard_count,
                   const GBOptions& gb) {
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const Polynomial& f = factors[k];
        bool soft = k >= hard_count;
        if (soft && normal_form(f, I, gb).is_zero()) continue;
        Ideal S = saturate(I, f, gb.named("saturation by " + format_monomial(*f.ring(), f.leading_monomial())));
        if (is_unit_ideal(S, gb)) {
            if (soft) continue;
            return S;
        }
        I = std::move(S);
    }
    return I;
}

// One ideal quotient per factor; the candidate passes if every factor is
// already a fixpoint (soft factors may instead saturate to the unit ideal,
// which marks them as vanishing on the critical scheme).
bool verify_saturated(const Ideal& candidate, const std::vector<Polynomial>& factors,
                      std::size_t hard_count, const GBOptions& gb) {
    if (is_unit_ideal(candidate, gb)) return false;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const Polynomial& f = factors[k];
        bool soft = k >= hard_count;
        if (soft && normal_form(f, candidate, gb).is_zero()) continue;
        Ideal Jq = ideal_quotient(candidate, f, gb.named("fixpoint check"));
        if (ideal_equal(Jq, candidate, gb)) continue;
        if (soft && is_unit_ideal(saturate(candidate, f, gb), gb)) continue;
        return false;
    }
    return true;
}

} // namespace

LikelihoodIdealResult likelihood_ideal(const ImplicitModel& model, const DataVector& u,
                                       const LikelihoodOptions& opts, const LikelihoodPrep* prep) {
    const RingPtr& ring = model.ring;
    if (static_cast<int>(u.u.size()) != ring->nvars())
        throw UsageError("data vector length does not match the model");
    Strategy strategy = resolve_strategy(model, opts.strategy);

    LikelihoodPrep local;
    if (prep == nullptr || (strategy == Strategy::Syzygy && !prep->kernel_computed)) {
        LikelihoodOptions o = opts;
        o.strategy = strategy;
        local = prepare_likelihood(model, o);
        prep = &local;
    }

    std::vector<Polynomial> pre_gens = critical_generators(model, u, strategy, *prep);
    Ideal Iprime(ring, pre_gens);

    std::vector<Polynomial> factors;
    for (int i = 0; i < ring->nvars(); ++i) factors.push_back(Polynomial::variable(ring, i));
    factors.push_back(sum_of_vars(ring));
    std::size_t hard_count = factors.size();
    factors.insert(factors.end(), prep->q_minors.begin(), prep->q_minors.end());

    LikelihoodIdealResult result;
    result.strategy_used = strategy;
    result.step4_used = Step4Mode::Full;

    bool saturated = false;
    if (opts.step4 == Step4Mode::PrimeThenVerify) {
        PolyMatrix Jt = build_augmented_jacobian(model).second;
        const int c = model.codim;
        Rng rng(opts.seed);
        for (int attempt = 0; attempt < 40 && !saturated; ++attempt) {
            std::vector<int> rows = random_subset(rng, Jt.rows, c + 1);
            std::vector<int> cols = random_subset(rng, Jt.cols, c + 1);
            Polynomial h = poly_minor(Jt, rows, cols);
            if (h.is_zero()) continue;
            h = h.primitive_part();
            if (normal_form(h, Iprime, opts.gb).is_zero()) continue;
            Ideal candidate = ideal_quotient(Iprime, h, opts.gb.named("quotient by random minor"));
            if (verify_saturated(candidate, factors, hard_count, opts.gb)) {
                result.likelihood_ideal = std::move(candidate);
                result.step4_used = Step4Mode::PrimeThenVerify;
                saturated = true;
            }
            break; // one candidate; a failed verification falls back to the full pass
        }
    }
    if (!saturated)
        result.likelihood_ideal = saturate_all(Iprime, factors, hard_count, opts.gb);

    std::vector<Polynomial> chart_gens = result.likelihood_ideal.generators();
    chart_gens.push_back(simplex_constraint(ring));
    result.chart = Ideal(ring, std::move(chart_gens));

    if (is_unit_ideal(result.chart, opts.gb)) {
        result.dimension = -1;
        result.colength = 0;
        return result;
    }
    DimResult dim = dimension_codim(result.chart, opts.gb.named("critical scheme dimension"));
    result.dimension = dim.dimension;
    if (dim.dimension > 0)
        throw DimensionError("degenerate data: the critical scheme has positive dimension",
                             dim.dimension);
    result.colength = colength(result.chart, opts.gb.named("critical scheme colength"));
    return result;
}

MLDegreeResult ml_degree(const ImplicitModel& model, std::uint64_t seed,
                         const LikelihoodOptions& opts) {
    const int n1 = model.ring->nvars();
    Rng rng(seed);
    LikelihoodOptions o = opts;
    o.strategy = resolve_strategy(model, opts.strategy);
    LikelihoodPrep prep = prepare_likelihood(model, o);

    struct Draw {
        bool ok = false;
        long colength = 0;
        int dimension = 0;
    };
    Draw draws[2];
    for (Draw& d : draws) {
        std::vector<Int> u(static_cast<std::size_t>(n1));
        for (Int& v : u) v = Int(static_cast<unsigned long>(rng.uniform(1, 10007)));
        o.seed = rng.uniform(1, ~std::uint64_t{0} - 1);
        try {
            LikelihoodIdealResult r = likelihood_ideal(model, DataVector{std::move(u)}, o, &prep);
            d.ok = true;
            d.colength = r.colength;
        } catch (const DimensionError& e) {
            d.dimension = e.dimension();
        }
    }
    if (!draws[0].ok && !draws[1].ok)
        throw DimensionError("degenerate data in both certification draws",
                             std::max(draws[0].dimension, draws[1].dimension));
    MLDegreeResult out;
    if (draws[0].ok && draws[1].ok) {
        out.certified = draws[0].colength == draws[1].colength;
        out.degree = std::min(draws[0].colength, draws[1].colength);
    } else {
        out.certified = false;
        out.degree = draws[0].ok ? draws[0].colength : draws[1].colength;
    }
    return out;
}

} // namespace mlcrit
