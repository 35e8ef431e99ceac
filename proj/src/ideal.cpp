#include "mlcrit/ideal.hpp"

#include "mlcrit/errors.hpp"
#include "modular_gb.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace mlcrit {

namespace {

void check_deadline(const GBOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw ComputationTimeout(opts.stage);
}

int pick_reducer(const std::vector<Polynomial>& basis, const Monomial& m) {
    int best = -1;
    std::size_t best_size = 0;
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
        const Polynomial& g = basis[static_cast<std::size_t>(k)];
        if (g.is_zero()) continue;
        if (!mono_divides(g.leading_monomial(), m)) continue;
        if (best < 0 || g.term_count() < best_size) {
            best = k;
            best_size = g.term_count();
        }
    }
    return best;
}

// Lead reduction only, fraction-free: coefficients stay integral throughout,
// with a periodic content strip to keep them short. The result is a nonzero
// constant multiple of the true remainder's direction, which is all the
// Buchberger loop needs; callers re-normalize. Requires primitive integral
// basis elements.
Polynomial reduce_top_ff(Polynomial work, const std::vector<Polynomial>& basis, const GBOptions& opts,
                         int* sugar = nullptr) {
    if (work.is_zero()) return work;
    work = work.primitive_part();
    long steps = 0;
    while (!work.is_zero()) {
        if (((++steps) & 0x3f) == 0) check_deadline(opts);
        int best = pick_reducer(basis, work.leading_monomial());
        if (best < 0) break;
        const Polynomial& g = basis[static_cast<std::size_t>(best)];
        Monomial shift = mono_div(work.leading_monomial(), g.leading_monomial());
        if (sugar) *sugar = std::max(*sugar, shift.degree + g.total_degree());
        Int d;
        mpz_gcd(d.get_mpz_t(), g.leading_coeff().get_num().get_mpz_t(),
                work.leading_coeff().get_num().get_mpz_t());
        Rat scale(g.leading_coeff().get_num() / d);
        Rat coef(-work.leading_coeff().get_num() / d);
        work = Polynomial::axpy2(scale, work, coef, shift, g);
        if ((steps & 0xf) == 0) work = work.primitive_part();
    }
    return work;
}

// Full normal form against an indexed family; reducer choice (fewest terms,
// then lowest index) is deterministic. `sugar` is updated in place when given.
Polynomial reduce_full(const Ring& R, Polynomial work, const std::vector<Polynomial>& basis,
                       const GBOptions& opts, int* sugar = nullptr) {
    (void)R;
    std::vector<Term> done;
    std::size_t pos = 0;
    long steps = 0;
    while (pos < work.terms().size()) {
        if (((++steps) & 0x3f) == 0) check_deadline(opts);
        const Term& lt = work.terms()[pos];
        int best = pick_reducer(basis, lt.mono);
        if (best < 0) {
            done.push_back(lt);
            ++pos;
            continue;
        }
        const Polynomial& g = basis[static_cast<std::size_t>(best)];
        Monomial shift = mono_div(lt.mono, g.leading_monomial());
        Rat c = -lt.coeff / g.leading_coeff();
        if (sugar) *sugar = std::max(*sugar, shift.degree + g.total_degree());
        work = Polynomial::axpy_tail(work, pos, c, shift, g);
        pos = 0;
    }
    return Polynomial::from_terms(work.ring(), std::move(done));
}

struct PairRec {
    int i, j; // i < j
    Monomial lcm;
    int sugar;
};

class BuchbergerEngine {
public:
    BuchbergerEngine(const RingPtr& ring, const GBOptions& opts) : ring_(ring), R_(*ring), opts_(opts) {}

    void add_input(const Polynomial& f) {
        if (f.is_zero()) return;
        int sug = f.total_degree();
        Polynomial h = reduce_full(R_, f, polys_, opts_, &sug);
        if (h.is_zero()) return;
        insert_basis(h.primitive_part(), sug);
    }

    void run() {
        long processed = 0;
        while (!pairs_.empty()) {
            check_deadline(opts_);
            PairRec pr = pop_best_pair();
            Polynomial s = spoly(pr);
            int sug = pr.sugar;
            Polynomial h = reduce_top_ff(std::move(s), polys_, opts_, &sug);
            ++processed;
            if (opts_.progress && (processed & 0xff) == 0)
                opts_.progress(static_cast<int>(polys_.size()), pairs_.size());
            if (h.is_zero()) continue;
            insert_basis(h.primitive_part(), sug);
        }
    }

    std::vector<Polynomial> reduced_basis() {
        // Minimal basis: drop elements whose leading monomial is divisible by
        // another survivor's.
        std::vector<int> keep;
        for (int i = 0; i < static_cast<int>(polys_.size()); ++i) {
            if (redundant_[static_cast<std::size_t>(i)]) continue;
            bool minimal = true;
            for (int j : keep)
                if (mono_divides(polys_[static_cast<std::size_t>(j)].leading_monomial(),
                                 polys_[static_cast<std::size_t>(i)].leading_monomial())) {
                    minimal = false;
                    break;
                }
            if (!minimal) continue;
            // Remove previously kept elements now seen to be non-minimal.
            std::vector<int> still;
            for (int j : keep)
                if (!mono_divides(polys_[static_cast<std::size_t>(i)].leading_monomial(),
                                  polys_[static_cast<std::size_t>(j)].leading_monomial()))
                    still.push_back(j);
            still.push_back(i);
            keep = std::move(still);
        }
        std::vector<Polynomial> out;
        out.reserve(keep.size());
        for (int j : keep) out.push_back(polys_[static_cast<std::size_t>(j)]);
        // Tail-reduce each against the others, then normalize.
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::vector<Polynomial> others;
            for (std::size_t j = 0; j < out.size(); ++j)
                if (j != i) others.push_back(out[j]);
            out[i] = reduce_full(R_, out[i], others, opts_).monic();
        }
        std::sort(out.begin(), out.end(), [&](const Polynomial& a, const Polynomial& b) {
            return R_.compare(a.leading_monomial(), b.leading_monomial()) < 0;
        });
        return out;
    }

private:
    Polynomial spoly(const PairRec& pr) {
        const Polynomial& f = polys_[static_cast<std::size_t>(pr.i)];
        const Polynomial& g = polys_[static_cast<std::size_t>(pr.j)];
        Monomial df = mono_div(pr.lcm, f.leading_monomial());
        Monomial dg = mono_div(pr.lcm, g.leading_monomial());
        Polynomial left = Polynomial::axpy(Polynomial::zero(ring_), Rat(1) / f.leading_coeff(), df, f);
        return Polynomial::axpy(left, Rat(-1) / g.leading_coeff(), dg, g);
    }

    PairRec pop_best_pair() {
        auto it = pairs_.begin();
        PairRec pr = *it;
        pairs_.erase(it);
        return pr;
    }

    void insert_basis(Polynomial h, int sugar) {
        int t = static_cast<int>(polys_.size());
        const Monomial& lt_h = h.leading_monomial();

        // Gebauer-Moeller criterion B: discard old pairs strictly superseded
        // by the newcomer.
        for (auto it = pairs_.begin(); it != pairs_.end();) {
            const Monomial& lti = polys_[static_cast<std::size_t>(it->i)].leading_monomial();
            const Monomial& ltj = polys_[static_cast<std::size_t>(it->j)].leading_monomial();
            if (mono_divides(lt_h, it->lcm) && mono_lcm(lti, lt_h) != it->lcm &&
                mono_lcm(ltj, lt_h) != it->lcm)
                it = pairs_.erase(it);
            else
                ++it;
        }

        // Candidate pairs with the newcomer, pruned by criteria M and F plus
        // the product criterion.
        struct Cand {
            int i;
            Monomial lcm;
            bool coprime;
        };
        std::vector<Cand> cands;
        for (int i = 0; i < t; ++i) {
            if (polys_[static_cast<std::size_t>(i)].is_zero()) continue;
            const Monomial& lti = polys_[static_cast<std::size_t>(i)].leading_monomial();
            cands.push_back({i, mono_lcm(lti, lt_h), mono_coprime(lti, lt_h)});
        }
        std::vector<char> dead(cands.size(), 0);
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dead[a]) continue;
            for (std::size_t b = 0; b < cands.size(); ++b) {
                if (a == b || dead[a]) continue;
                if (dead[b]) continue;
                if (cands[b].lcm != cands[a].lcm && mono_divides(cands[b].lcm, cands[a].lcm)) dead[a] = 1;
            }
        }
        // Group survivors with equal lcm: a coprime member kills the group,
        // otherwise keep the lowest index.
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dead[a]) continue;
            bool group_coprime = cands[a].coprime;
            std::size_t rep = a;
            for (std::size_t b = a + 1; b < cands.size(); ++b) {
                if (dead[b] || cands[b].lcm != cands[a].lcm) continue;
                group_coprime = group_coprime || cands[b].coprime;
                dead[b] = 1;
            }
            if (group_coprime) {
                dead[rep] = 1;
                continue;
            }
            const Polynomial& fi = polys_[static_cast<std::size_t>(cands[a].i)];
            int sug = std::max(sugar_[static_cast<std::size_t>(cands[a].i)] +
                                   mono_div(cands[a].lcm, fi.leading_monomial()).degree,
                               sugar + mono_div(cands[a].lcm, lt_h).degree);
            pairs_.insert({cands[a].i, t, cands[a].lcm, sug});
        }

        for (int i = 0; i < t; ++i) {
            if (redundant_[static_cast<std::size_t>(i)]) continue;
            if (mono_divides(lt_h, polys_[static_cast<std::size_t>(i)].leading_monomial()))
                redundant_[static_cast<std::size_t>(i)] = 1;
        }
        polys_.push_back(std::move(h));
        sugar_.push_back(sugar);
        redundant_.push_back(0);
    }

    struct PairLess {
        const Ring* R;
        bool operator()(const PairRec& a, const PairRec& b) const {
            if (a.sugar != b.sugar) return a.sugar < b.sugar;
            int c = R->compare(a.lcm, b.lcm);
            if (c != 0) return c < 0;
            if (a.j != b.j) return a.j < b.j;
            return a.i < b.i;
        }
    };

    RingPtr ring_;
    const Ring& R_;
    GBOptions opts_;
    std::vector<Polynomial> polys_;
    std::vector<int> sugar_;
    std::vector<char> redundant_;
    std::set<PairRec, PairLess> pairs_{PairLess{&*ring_}};

};

} // namespace

std::vector<Polynomial> buchberger(const RingPtr& ring, std::vector<Polynomial> gens, const GBOptions& opts) {
    // Feed smaller polynomials first: cheaper interreduction, deterministic.
    std::stable_sort(gens.begin(), gens.end(), [&](const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return b.is_zero() && !a.is_zero();
        return ring->compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    for (const auto& g : gens)
        if (!g.is_zero() && !g.ring()->same_as(*ring)) throw UsageError("generator from a different ring");
    if (opts.modular)
        if (auto lifted = detail::modular_groebner_candidate(ring, gens, opts)) return *lifted;
    BuchbergerEngine eng(ring, opts);
    for (const auto& g : gens) eng.add_input(g);
    eng.run();
    return eng.reduced_basis();
}

Ideal::Ideal(RingPtr ring, std::vector<Polynomial> gens) : ring_(std::move(ring)), gens_(std::move(gens)) {
    for (const auto& g : gens_)
        if (!g.is_zero() && !g.ring()->same_as(*ring_)) throw UsageError("generator from a different ring");
}

Ideal Ideal::from_groebner_basis(RingPtr ring, std::vector<Polynomial> gb) {
    Ideal I(std::move(ring), std::move(gb));
    I.gb_ = std::make_shared<const std::vector<Polynomial>>(I.gens_);
    return I;
}

const std::vector<Polynomial>& Ideal::groebner_basis(const GBOptions& opts) const {
    if (!gb_) gb_ = std::make_shared<const std::vector<Polynomial>>(buchberger(ring_, gens_, opts));
    return *gb_;
}

Ideal with_order(const Ideal& I, const MonomialOrder& order) {
    RingPtr nr = make_ring(I.ring()->var_names(), order);
    std::vector<Polynomial> gens;
    gens.reserve(I.generators().size());
    for (const auto& g : I.generators()) gens.push_back(g.with_ring(nr));
    return Ideal(nr, std::move(gens));
}

Polynomial normal_form(const Polynomial& f, const Ideal& I, const GBOptions& opts) {
    const auto& gb = I.groebner_basis(opts);
    Polynomial g = f.ring()->same_as(*I.ring()) ? f : f.with_ring(I.ring());
    return reduce_full(*I.ring(), g, gb, opts);
}

bool ideal_contains(const Ideal& I, const Polynomial& f, const GBOptions& opts) {
    return normal_form(f, I, opts).is_zero();
}

bool is_unit_ideal(const Ideal& I, const GBOptions& opts) {
    const auto& gb = I.groebner_basis(opts);
    return gb.size() == 1 && gb[0].is_constant() && !gb[0].is_zero();
}

bool ideal_equal(const Ideal& A, const Ideal& B, const GBOptions& opts) {
    if (!A.ring()->same_vars(*B.ring())) return false;
    const auto& ga = A.groebner_basis(opts);
    Ideal Bo = B.ring()->same_as(*A.ring()) ? B : with_order(B, A.ring()->order());
    const auto& gbv = Bo.groebner_basis(opts);
    if (ga.size() != gbv.size()) return false;
    for (std::size_t i = 0; i < ga.size(); ++i)
        if (!(ga[i] == gbv[i].with_ring(A.ring()))) return false;
    return true;
}

namespace {

// Elimination order that pushes `drop` variables in front; restricted to the
// kept variables it coincides with grevlex in declaration order.
MonomialOrder elimination_order(int nvars, const std::vector<int>& drop) {
    std::vector<char> dropped(static_cast<std::size_t>(nvars), 0);
    for (int v : drop) dropped[static_cast<std::size_t>(v)] = 1;
    std::vector<int> perm;
    for (int v = 0; v < nvars; ++v)
        if (dropped[static_cast<std::size_t>(v)]) perm.push_back(v);
    for (int v = 0; v < nvars; ++v)
        if (!dropped[static_cast<std::size_t>(v)]) perm.push_back(v);
    return MonomialOrder::elim(static_cast<int>(drop.size()), perm);
}

} // namespace

Ideal eliminate(const Ideal& I, const std::vector<int>& drop_vars, const GBOptions& opts) {
    const RingPtr& ring = I.ring();
    Ideal J = with_order(I, elimination_order(ring->nvars(), drop_vars));
    const auto& gb = J.groebner_basis(opts);

    std::vector<char> dropped(static_cast<std::size_t>(ring->nvars()), 0);
    for (int v : drop_vars) dropped[static_cast<std::size_t>(v)] = 1;
    std::vector<std::string> kept_names;
    std::vector<int> var_map(static_cast<std::size_t>(ring->nvars()), -1);
    for (int v = 0; v < ring->nvars(); ++v) {
        if (dropped[static_cast<std::size_t>(v)]) continue;
        var_map[static_cast<std::size_t>(v)] = static_cast<int>(kept_names.size());
        kept_names.push_back(ring->var_name(v));
    }
    RingPtr sub = make_ring(std::move(kept_names));

    std::vector<Polynomial> kept;
    for (const auto& g : gb) {
        bool free_of_dropped = true;
        for (int v : drop_vars)
            if (g.uses_var(v)) {
                free_of_dropped = false;
                break;
            }
        if (free_of_dropped) kept.push_back(g.map_vars(sub, var_map));
    }
    // The t-free slice of an elimination-order basis is itself a reduced basis
    // for the elimination ideal under grevlex on the subring.
    return Ideal::from_groebner_basis(sub, std::move(kept));
}

namespace {

// Shared plumbing for the t-tricks: extend the ring by a fresh variable t
// (placed last, dominant in the order), map the generators up, and give the
// caller the extension pieces.
struct Extension {
    RingPtr ext;
    int t_index;
    std::vector<int> up_map;   // original var -> extended var
    std::vector<int> down_map; // extended var -> original var (t -> -1)
};

Extension extend_by_t(const RingPtr& ring) {
    Extension e;
    std::vector<std::string> names = ring->var_names();
    names.push_back("t@");
    e.t_index = ring->nvars();
    std::vector<int> perm{e.t_index};
    for (int v = 0; v < ring->nvars(); ++v) perm.push_back(v);
    e.ext = make_ring(std::move(names), MonomialOrder::elim(1, std::move(perm)));
    for (int v = 0; v < ring->nvars(); ++v) e.up_map.push_back(v);
    e.down_map.assign(static_cast<std::size_t>(ring->nvars() + 1), -1);
    for (int v = 0; v < ring->nvars(); ++v) e.down_map[static_cast<std::size_t>(v)] = v;
    return e;
}

// Collect the t-free part of a basis over the extension, mapped back down.
// When the original ring uses plain grevlex the result is again a reduced
// basis there, so hand the cache over.
Ideal descend_t_free(const RingPtr& ring, const Extension& e, const std::vector<Polynomial>& gb) {
    std::vector<Polynomial> kept;
    for (const auto& g : gb)
        if (!g.uses_var(e.t_index)) kept.push_back(g.map_vars(ring, e.down_map));
    if (ring->order() == MonomialOrder::grevlex()) return Ideal::from_groebner_basis(ring, std::move(kept));
    return Ideal(ring, std::move(kept));
}

} // namespace

Polynomial exact_divide(const Polynomial& g, const Polynomial& f) {
    if (f.is_zero()) throw UsageError("division by zero polynomial");
    Polynomial rem = g;
    Polynomial quot = Polynomial::zero(g.ring());
    while (!rem.is_zero()) {
        if (!mono_divides(f.leading_monomial(), rem.leading_monomial()))
            throw UsageError("polynomial division left a remainder");
        Monomial shift = mono_div(rem.leading_monomial(), f.leading_monomial());
        Rat c = rem.leading_coeff() / f.leading_coeff();
        quot = Polynomial::axpy(quot, c, shift, Polynomial::constant(g.ring(), 1));
        rem = Polynomial::axpy(rem, -c, shift, f);
    }
    return quot;
}

Ideal ideal_quotient(const Ideal& I, const Polynomial& f, const GBOptions& opts) {
    if (f.is_zero()) throw UsageError("quotient by the zero polynomial");
    if (f.is_constant()) return I;
    // (I : f) = (1/f) * (I intersect <f>), and the intersection comes from
    // eliminating t in t*I + (1-t)*<f>.
    Extension e = extend_by_t(I.ring());
    Polynomial t = Polynomial::variable(e.ext, e.t_index);
    Polynomial one_minus_t = Polynomial::constant(e.ext, 1) - t;
    std::vector<Polynomial> gens;
    for (const auto& g : I.generators()) gens.push_back(t * g.map_vars(e.ext, e.up_map));
    gens.push_back(one_minus_t * f.map_vars(e.ext, e.up_map));
    auto gb = buchberger(e.ext, std::move(gens), opts);
    std::vector<Polynomial> quot;
    for (const auto& g : gb)
        if (!g.uses_var(e.t_index)) quot.push_back(exact_divide(g.map_vars(I.ring(), e.down_map), f).primitive_part());
    return Ideal(I.ring(), std::move(quot));
}

Ideal saturate(const Ideal& I, const Polynomial& f, const GBOptions& opts) {
    if (f.is_zero()) throw UsageError("saturation by the zero polynomial");
    if (f.is_constant()) return I;
    Extension e = extend_by_t(I.ring());
    std::vector<Polynomial> gens;
    for (const auto& g : I.generators()) gens.push_back(g.map_vars(e.ext, e.up_map));
    Polynomial tf = Polynomial::variable(e.ext, e.t_index) * f.map_vars(e.ext, e.up_map);
    gens.push_back(tf - Polynomial::constant(e.ext, 1));
    auto gb = buchberger(e.ext, std::move(gens), opts);
    return descend_t_free(I.ring(), e, gb);
}

DimResult dimension_codim(const Ideal& I, const GBOptions& opts) {
    const auto& gb = I.groebner_basis(opts);
    if (is_unit_ideal(I, opts)) throw UnitIdealError("dimension of the unit ideal is undefined");
    int n = I.ring()->nvars();
    std::vector<std::uint32_t> supports;
    supports.reserve(gb.size());
    for (const auto& g : gb) {
        std::uint32_t mask = 0;
        for (int v = 0; v < n; ++v)
            if (g.leading_monomial()[v] != 0) mask |= (1u << v);
        supports.push_back(mask);
    }
    // A variable set S is independent iff no leading-term support lies inside
    // S; the dimension is the size of the largest independent set.
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int size = __builtin_popcount(mask);
        if (size <= best) continue;
        bool independent = true;
        for (std::uint32_t s : supports)
            if ((s & ~mask) == 0) {
                independent = false;
                break;
            }
        if (independent) best = size;
    }
    return {best, n - best};
}

std::vector<Monomial> standard_monomials(const Ideal& I, const GBOptions& opts) {
    DimResult d = dimension_codim(I, opts);
    if (d.dimension != 0)
        throw DimensionError("standard monomial basis requires a zero-dimensional ideal", d.dimension);
    const auto& gb = I.groebner_basis(opts);
    std::vector<Monomial> leads;
    leads.reserve(gb.size());
    for (const auto& g : gb) leads.push_back(g.leading_monomial());

    const Ring& R = *I.ring();
    auto less = [&](const Monomial& a, const Monomial& b) { return R.compare(a, b) < 0; };
    std::set<Monomial, decltype(less)> seen(less);
    std::vector<Monomial> queue{Monomial::one()};
    seen.insert(Monomial::one());
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        Monomial m = queue[qi];
        for (int v = 0; v < R.nvars(); ++v) {
            Monomial mv = mono_mul(m, Monomial::var(v));
            bool reducible = false;
            for (const auto& l : leads)
                if (mono_divides(l, mv)) {
                    reducible = true;
                    break;
                }
            if (reducible || seen.count(mv)) continue;
            seen.insert(mv);
            queue.push_back(mv);
            if (seen.size() > 200000)
                throw DimensionError("standard monomial basis is unexpectedly large", 0);
        }
    }
    return std::vector<Monomial>(seen.begin(), seen.end());
}

long colength(const Ideal& I, const GBOptions& opts) {
    if (is_unit_ideal(I, opts)) return 0;
    return static_cast<long>(standard_monomials(I, opts).size());
}

} // namespace mlcrit
