#include "modular_gb.hpp"

#include "mlcrit/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

namespace mlcrit::detail {

namespace {

using u64 = std::uint64_t;

void check_deadline(const GBOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw ComputationTimeout(opts.stage);
}

// Word-size primes just above 2^30: residue products fit in 64 bits, and the
// pool is deep enough to lift coefficients of ~900 bits before giving up.
const std::vector<u64>& prime_pool() {
    static const std::vector<u64> pool = [] {
        std::vector<u64> ps;
        mpz_class p = 1073741824; // 2^30
        for (int i = 0; i < 60; ++i) {
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
            ps.push_back(p.get_ui());
        }
        return ps;
    }();
    return pool;
}

// Signals a prime that divides some input denominator; the driver skips it.
struct BadPrime {};

struct Mod {
    u64 p;
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= p ? s - p : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 mul(u64 a, u64 b) const { return a * b % p; }
    u64 neg(u64 a) const { return a ? p - a : 0; }
    u64 pow(u64 a, u64 e) const {
        u64 r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    u64 inv(u64 a) const {
        if (a == 0) throw BadPrime{};
        return pow(a, p - 2);
    }
};

struct TermP {
    Monomial mono;
    u64 c;
};

// Sparse polynomial over Z/p; terms strictly descending in the ring order
// with nonzero coefficients, mirroring the exact representation.
struct PolyP {
    std::vector<TermP> t;
    bool zero() const { return t.empty(); }
    const Monomial& lm() const { return t.front().mono; }
    int degree() const {
        int d = -1;
        for (const auto& tm : t) d = std::max(d, tm.mono.degree);
        return d;
    }
};

u64 rat_mod(const Rat& q, const Mod& md) {
    u64 n = mpz_fdiv_ui(q.get_num().get_mpz_t(), md.p);
    u64 d = mpz_fdiv_ui(q.get_den().get_mpz_t(), md.p);
    return md.mul(n, md.inv(d));
}

PolyP poly_mod(const Polynomial& f, const Mod& md) {
    PolyP out;
    out.t.reserve(f.term_count());
    for (const auto& tm : f.terms()) {
        u64 c = rat_mod(tm.coeff, md);
        if (c) out.t.push_back({tm.mono, c});
    }
    return out;
}

// a[from..] + c * x^shift * b in one merge; terms of `a` before `from` are the
// caller's already-emitted prefix.
PolyP axpy_tail_p(const Ring& R, const Mod& md, const PolyP& a, std::size_t from, u64 c,
                  const Monomial& shift, const PolyP& b) {
    PolyP out;
    out.t.reserve(a.t.size() - from + b.t.size());
    std::size_t i = from, j = 0;
    while (i < a.t.size() || j < b.t.size()) {
        if (j == b.t.size()) {
            out.t.push_back(a.t[i++]);
            continue;
        }
        Monomial bm = mono_mul(b.t[j].mono, shift);
        if (i == a.t.size()) {
            u64 v = md.mul(c, b.t[j++].c);
            if (v) out.t.push_back({bm, v});
            continue;
        }
        int cmp = R.compare(a.t[i].mono, bm);
        if (cmp > 0) {
            out.t.push_back(a.t[i++]);
        } else if (cmp < 0) {
            u64 v = md.mul(c, b.t[j++].c);
            if (v) out.t.push_back({bm, v});
        } else {
            u64 v = md.add(a.t[i].c, md.mul(c, b.t[j].c));
            if (v) out.t.push_back({a.t[i].mono, v});
            ++i;
            ++j;
        }
    }
    return out;
}

int pick_reducer_p(const std::vector<PolyP>& basis, const Monomial& m) {
    int best = -1;
    std::size_t best_size = 0;
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
        const PolyP& g = basis[static_cast<std::size_t>(k)];
        if (g.zero()) continue;
        if (!mono_divides(g.lm(), m)) continue;
        if (best < 0 || g.t.size() < best_size) {
            best = k;
            best_size = g.t.size();
        }
    }
    return best;
}

// Full normal form against a monic family. `deg` carries the basis total
// degrees and is only consulted when `sugar` is requested.
PolyP nf_p(const Ring& R, const Mod& md, PolyP work, const std::vector<PolyP>& basis,
           const std::vector<int>& deg, const GBOptions& opts, int* sugar = nullptr) {
    std::vector<TermP> done;
    std::size_t pos = 0;
    long steps = 0;
    while (pos < work.t.size()) {
        if (((++steps) & 0xff) == 0) check_deadline(opts);
        const TermP& lt = work.t[pos];
        int best = pick_reducer_p(basis, lt.mono);
        if (best < 0) {
            done.push_back(lt);
            ++pos;
            continue;
        }
        const PolyP& g = basis[static_cast<std::size_t>(best)];
        Monomial shift = mono_div(lt.mono, g.lm());
        if (sugar) *sugar = std::max(*sugar, shift.degree + deg[static_cast<std::size_t>(best)]);
        work = axpy_tail_p(R, md, work, pos, md.neg(lt.c), shift, g);
        pos = 0;
    }
    return PolyP{std::move(done)};
}

struct PairRecP {
    int i, j; // i < j
    Monomial lcm;
    int sugar;
};

// Same pair bookkeeping as the exact engine (sugar selection, Gebauer-Moeller
// pruning); only the coefficient arithmetic differs.
class EngineP {
public:
    EngineP(const Ring& R, Mod md, const GBOptions& opts)
        : R_(R), md_(md), opts_(opts), pairs_(PairLess{&R}) {}

    void add_input(PolyP f) {
        if (f.zero()) return;
        int sug = f.degree();
        PolyP h = nf_p(R_, md_, std::move(f), polys_, deg_, opts_, &sug);
        if (h.zero()) return;
        insert(make_monic(std::move(h)), sug);
    }

    void run() {
        long processed = 0;
        while (!pairs_.empty()) {
            check_deadline(opts_);
            PairRecP pr = *pairs_.begin();
            pairs_.erase(pairs_.begin());
            PolyP s = spoly(pr);
            int sug = pr.sugar;
            PolyP h = nf_p(R_, md_, std::move(s), polys_, deg_, opts_, &sug);
            ++processed;
            if (opts_.progress && (processed & 0xff) == 0)
                opts_.progress(static_cast<int>(polys_.size()), pairs_.size());
            if (h.zero()) continue;
            insert(make_monic(std::move(h)), sug);
        }
    }

    std::vector<PolyP> reduced_basis() {
        std::vector<int> keep;
        for (int i = 0; i < static_cast<int>(polys_.size()); ++i) {
            if (redundant_[static_cast<std::size_t>(i)]) continue;
            bool minimal = true;
            for (int j : keep)
                if (mono_divides(polys_[static_cast<std::size_t>(j)].lm(),
                                 polys_[static_cast<std::size_t>(i)].lm())) {
                    minimal = false;
                    break;
                }
            if (!minimal) continue;
            std::vector<int> still;
            for (int j : keep)
                if (!mono_divides(polys_[static_cast<std::size_t>(i)].lm(),
                                  polys_[static_cast<std::size_t>(j)].lm()))
                    still.push_back(j);
            still.push_back(i);
            keep = std::move(still);
        }
        std::vector<PolyP> out;
        out.reserve(keep.size());
        for (int j : keep) out.push_back(polys_[static_cast<std::size_t>(j)]);
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::vector<PolyP> others;
            for (std::size_t j = 0; j < out.size(); ++j)
                if (j != i) others.push_back(out[j]);
            std::vector<int> dummy(others.size(), 0);
            out[i] = make_monic(nf_p(R_, md_, out[i], others, dummy, opts_));
        }
        std::sort(out.begin(), out.end(),
                  [&](const PolyP& a, const PolyP& b) { return R_.compare(a.lm(), b.lm()) < 0; });
        return out;
    }

private:
    PolyP make_monic(PolyP f) {
        u64 s = md_.inv(f.t.front().c);
        if (s != 1)
            for (auto& tm : f.t) tm.c = md_.mul(tm.c, s);
        return f;
    }

    PolyP spoly(const PairRecP& pr) {
        const PolyP& f = polys_[static_cast<std::size_t>(pr.i)];
        const PolyP& g = polys_[static_cast<std::size_t>(pr.j)];
        Monomial df = mono_div(pr.lcm, f.lm());
        Monomial dg = mono_div(pr.lcm, g.lm());
        PolyP sf;
        sf.t.reserve(f.t.size());
        for (const auto& tm : f.t) sf.t.push_back({mono_mul(tm.mono, df), tm.c});
        return axpy_tail_p(R_, md_, sf, 0, md_.p - 1, dg, g);
    }

    void insert(PolyP h, int sugar) {
        int t = static_cast<int>(polys_.size());
        const Monomial& lt_h = h.lm();

        for (auto it = pairs_.begin(); it != pairs_.end();) {
            const Monomial& lti = polys_[static_cast<std::size_t>(it->i)].lm();
            const Monomial& ltj = polys_[static_cast<std::size_t>(it->j)].lm();
            if (mono_divides(lt_h, it->lcm) && mono_lcm(lti, lt_h) != it->lcm &&
                mono_lcm(ltj, lt_h) != it->lcm)
                it = pairs_.erase(it);
            else
                ++it;
        }

        struct Cand {
            int i;
            Monomial lcm;
            bool coprime;
        };
        std::vector<Cand> cands;
        for (int i = 0; i < t; ++i) {
            if (polys_[static_cast<std::size_t>(i)].zero()) continue;
            const Monomial& lti = polys_[static_cast<std::size_t>(i)].lm();
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
            const PolyP& fi = polys_[static_cast<std::size_t>(cands[a].i)];
            int sug = std::max(sugar_[static_cast<std::size_t>(cands[a].i)] +
                                   mono_div(cands[a].lcm, fi.lm()).degree,
                               sugar + mono_div(cands[a].lcm, lt_h).degree);
            pairs_.insert({cands[a].i, t, cands[a].lcm, sug});
        }

        for (int i = 0; i < t; ++i) {
            if (redundant_[static_cast<std::size_t>(i)]) continue;
            if (mono_divides(lt_h, polys_[static_cast<std::size_t>(i)].lm()))
                redundant_[static_cast<std::size_t>(i)] = 1;
        }
        polys_.push_back(std::move(h));
        sugar_.push_back(sugar);
        deg_.push_back(polys_.back().degree());
        redundant_.push_back(0);
    }

    struct PairLess {
        const Ring* R;
        bool operator()(const PairRecP& a, const PairRecP& b) const {
            if (a.sugar != b.sugar) return a.sugar < b.sugar;
            int c = R->compare(a.lcm, b.lcm);
            if (c != 0) return c < 0;
            if (a.j != b.j) return a.j < b.j;
            return a.i < b.i;
        }
    };

    const Ring& R_;
    Mod md_;
    GBOptions opts_;
    std::vector<PolyP> polys_;
    std::vector<int> sugar_;
    std::vector<int> deg_;
    std::vector<char> redundant_;
    std::set<PairRecP, PairLess> pairs_;
};

std::vector<PolyP> gb_mod_p(const Ring& R, const std::vector<Polynomial>& gens, u64 p,
                            const GBOptions& opts) {
    Mod md{p};
    EngineP eng(R, md, opts);
    for (const auto& g : gens) eng.add_input(poly_mod(g, md));
    eng.run();
    return eng.reduced_basis();
}

// n/d with |n|, d <= bound and n/d == c mod M, when such a (unique) fraction
// exists; half-extended Euclid.
std::optional<Rat> rat_reconstruct(const mpz_class& c, const mpz_class& M, const mpz_class& bound) {
    mpz_class r0 = M, r1 = c % M;
    if (r1 < 0) r1 += M;
    mpz_class t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    mpz_class n = r1, d = t1;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (d > bound) return std::nullopt;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g != 1) return std::nullopt;
    Rat q(n, d);
    q.canonicalize();
    return q;
}

struct Run {
    u64 p;
    std::vector<PolyP> gb;
};

bool signature_equal(const std::vector<PolyP>& a, const std::vector<PolyP>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].lm() != b[i].lm()) return false;
    return true;
}

// CRT across the group's primes, coefficient by coefficient (union support;
// a monomial missing from one run is a residue of zero), then the rational
// lift. Fails as a whole when any coefficient refuses to reconstruct.
std::optional<std::vector<Polynomial>> lift_group(const RingPtr& ring, const std::vector<Run>& runs,
                                                  const std::vector<std::size_t>& group) {
    const Ring& R = *ring;
    mpz_class M = 1;
    for (std::size_t k : group) M *= mpz_class(runs[k].p);
    mpz_class half = (M - 1) / 2;
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());

    std::size_t m = runs[group[0]].gb.size();
    std::vector<Polynomial> out;
    out.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
        auto desc = [&R](const Monomial& a, const Monomial& b) { return R.compare(a, b) > 0; };
        std::map<Monomial, std::vector<u64>, decltype(desc)> support(desc);
        for (std::size_t k = 0; k < group.size(); ++k)
            for (const auto& tm : runs[group[k]].gb[e].t) {
                auto& v = support.try_emplace(tm.mono, group.size(), u64{0}).first->second;
                v[k] = tm.c;
            }
        std::vector<Term> terms;
        terms.reserve(support.size());
        for (const auto& [mono, residues] : support) {
            mpz_class x(residues[0]);
            mpz_class Mk(runs[group[0]].p);
            for (std::size_t k = 1; k < group.size(); ++k) {
                Mod md{runs[group[k]].p};
                u64 xk = mpz_fdiv_ui(x.get_mpz_t(), md.p);
                u64 delta = md.sub(residues[k], xk);
                u64 scale = md.mul(delta, md.inv(mpz_fdiv_ui(Mk.get_mpz_t(), md.p)));
                x += Mk * mpz_class(scale);
                Mk *= mpz_class(md.p);
            }
            auto q = rat_reconstruct(x, M, bound);
            if (!q) return std::nullopt;
            if (*q != 0) terms.push_back({std::move(*q), mono});
        }
        out.push_back(Polynomial::from_terms(ring, std::move(terms)));
    }
    std::sort(out.begin(), out.end(), [&R](const Polynomial& a, const Polynomial& b) {
        return R.compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });
    return out;
}

// Exact-arithmetic certificate for a lifted candidate: syntactically reduced,
// every input generator reduces to zero against it, and every S-polynomial
// reduces to zero (product criterion plus the classical chain criterion,
// sound here by induction on the pair lcm). Together these prove G is the
// reduced Groebner basis of an ideal containing the input span.
bool verify_candidate(const RingPtr& ring, const std::vector<Polynomial>& G,
                      const std::vector<Polynomial>& gens, const GBOptions& opts) {
    std::size_t m = G.size();
    for (const auto& g : G)
        if (g.is_zero() || g.leading_coeff() != 1) return false;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            for (const auto& tm : G[i].terms())
                if (mono_divides(G[j].leading_monomial(), tm.mono)) return false;
        }

    Ideal I = Ideal::from_groebner_basis(ring, G);
    for (const auto& f : gens)
        if (!normal_form(f, I, opts).is_zero()) return false;

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            check_deadline(opts);
            const Monomial& li = G[i].leading_monomial();
            const Monomial& lj = G[j].leading_monomial();
            if (mono_coprime(li, lj)) continue;
            Monomial lcm = mono_lcm(li, lj);
            bool chained = false;
            for (std::size_t k = 0; k < m && !chained; ++k) {
                if (k == i || k == j) continue;
                const Monomial& lk = G[k].leading_monomial();
                chained = mono_divides(lk, lcm) && mono_lcm(li, lk) != lcm && mono_lcm(lk, lj) != lcm;
            }
            if (chained) continue;
            Polynomial s = Polynomial::axpy(Polynomial::zero(ring), Rat(1), mono_div(lcm, li), G[i]);
            s = Polynomial::axpy(s, Rat(-1), mono_div(lcm, lj), G[j]);
            if (!normal_form(s, I, opts).is_zero()) return false;
        }
    return true;
}

} // namespace

std::optional<std::vector<Polynomial>> modular_groebner_candidate(const RingPtr& ring,
                                                                  const std::vector<Polynomial>& gens_in,
                                                                  const GBOptions& opts) {
    std::vector<Polynomial> gens;
    gens.reserve(gens_in.size());
    for (const auto& g : gens_in)
        if (!g.is_zero()) gens.push_back(g.primitive_part());
    if (gens.empty()) return std::vector<Polynomial>{};

    const auto& pool = prime_pool();
    std::vector<Run> runs;
    std::size_t next = 0;

    auto add_run = [&]() -> bool {
        while (next < pool.size()) {
            u64 p = pool[next++];
            try {
                Run r{p, gb_mod_p(*ring, gens, p, opts)};
                runs.push_back(std::move(r));
                return true;
            } catch (const BadPrime&) {
                continue;
            }
        }
        return false;
    };

    // Majority vote on the leading-term signature, then CRT + rational lift
    // over the agreeing runs; widen the prime set until the lift passes the
    // exact certificate or the pool is exhausted.
    for (;;) {
        while (runs.size() < 2)
            if (!add_run()) return std::nullopt;
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            bool placed = false;
            for (auto& g : groups)
                if (signature_equal(runs[g[0]].gb, runs[i].gb)) {
                    g.push_back(i);
                    placed = true;
                    break;
                }
            if (!placed) groups.push_back({i});
        }
        std::size_t best = 0;
        for (std::size_t g = 1; g < groups.size(); ++g)
            if (groups[g].size() > groups[best].size()) best = g;
        if (groups[best].size() < 2) {
            if (!add_run()) return std::nullopt;
            continue;
        }
        if (auto cand = lift_group(ring, runs, groups[best]))
            if (verify_candidate(ring, *cand, gens, opts)) return cand;
        if (!add_run()) return std::nullopt;
    }
}

} // namespace mlcrit::detail
