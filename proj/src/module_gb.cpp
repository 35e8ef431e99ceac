#include "mlcrit/module_gb.hpp"

#include "mlcrit/errors.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace mlcrit {

Polynomial poly_det(const PolyMatrix& A) {
    if (A.rows != A.cols) throw UsageError("determinant of a non-square matrix");
    std::vector<int> idx;
    for (int i = 0; i < A.rows; ++i) idx.push_back(i);
    return poly_minor(A, idx, idx);
}

Polynomial poly_minor(const PolyMatrix& A, const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.size() != cols.size()) throw UsageError("minor requires equally many rows and columns");
    std::size_t n = rows.size();
    if (n == 0) return Polynomial::constant(A.ring, 1);
    if (n == 1) return A.at(rows[0], cols[0]);
    Polynomial sum = Polynomial::zero(A.ring);
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < n; ++j) {
        const Polynomial& pivot = A.at(rows[0], cols[j]);
        if (pivot.is_zero()) continue;
        std::vector<int> sub_cols;
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) sub_cols.push_back(cols[k]);
        Polynomial c = pivot * poly_minor(A, sub_rows, sub_cols);
        sum = (j % 2 == 0) ? sum + c : sum - c;
    }
    return sum;
}

namespace {

void subsets_of(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

} // namespace

std::vector<Polynomial> all_minors(const PolyMatrix& A, int k) {
    std::vector<std::vector<int>> row_sets, col_sets;
    subsets_of(A.rows, k, row_sets);
    subsets_of(A.cols, k, col_sets);
    std::vector<Polynomial> out;
    out.reserve(row_sets.size() * col_sets.size());
    for (const auto& rs : row_sets)
        for (const auto& cs : col_sets) out.push_back(poly_minor(A, rs, cs));
    return out;
}

namespace {

struct ModTerm {
    Rat coeff;
    Monomial mono;
    int comp;
};

// Order on module terms: an optional elimination block of variables that
// dominates everything (used for the t of module saturation), then
// position-over-term (lower component wins), then grevlex. The block must
// outrank the component so that t-free elements form the eliminated module.
struct ModOrder {
    const Ring* ring;

    ModOrder(const Ring* r, std::vector<int> block_vars)
        : ring(r), block_vars_(std::move(block_vars)), base_(MonomialOrder::grevlex()) {}

    int compare(const ModTerm& a, const ModTerm& b) const {
        if (!block_vars_.empty()) {
            int da = block_degree(a.mono), db = block_degree(b.mono);
            if (da != db) return da > db ? 1 : -1;
        }
        if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
        return base_.compare(a.mono, b.mono, ring->nvars());
    }

    int block_degree(const Monomial& m) const {
        int d = 0;
        for (int v : block_vars_) d += m[v];
        return d;
    }

private:
    std::vector<int> block_vars_;
    MonomialOrder base_;
};

class ModPoly {
public:
    std::vector<ModTerm> terms; // sorted strictly descending

    bool is_zero() const { return terms.empty(); }
    const ModTerm& lead() const { return terms.front(); }
};

ModPoly mod_normalize(const ModOrder& O, std::vector<ModTerm> terms) {
    std::sort(terms.begin(), terms.end(), [&](const ModTerm& a, const ModTerm& b) { return O.compare(a, b) > 0; });
    ModPoly p;
    p.terms.reserve(terms.size());
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        if (!p.terms.empty() && p.terms.back().comp == t.comp && p.terms.back().mono == t.mono) {
            p.terms.back().coeff += t.coeff;
            if (p.terms.back().coeff == 0) p.terms.pop_back();
        } else {
            p.terms.push_back(std::move(t));
        }
    }
    return p;
}

// work(from..) + c * x^shift * g, single merge.
ModPoly mod_axpy_tail(const ModOrder& O, const ModPoly& a, std::size_t from, const Rat& c, const Monomial& shift,
                      const ModPoly& b) {
    ModPoly out;
    out.terms.reserve(a.terms.size() - from + b.terms.size());
    std::size_t i = from, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
        ModTerm bt{c * b.terms[j].coeff, mono_mul(shift, b.terms[j].mono), b.terms[j].comp};
        int cmp = O.compare(a.terms[i], bt);
        if (cmp > 0) {
            out.terms.push_back(a.terms[i++]);
        } else if (cmp < 0) {
            out.terms.push_back(std::move(bt));
            ++j;
        } else {
            Rat s = a.terms[i].coeff + bt.coeff;
            if (s != 0) out.terms.push_back({std::move(s), a.terms[i].mono, a.terms[i].comp});
            ++i;
            ++j;
        }
    }
    for (; i < a.terms.size(); ++i) out.terms.push_back(a.terms[i]);
    for (; j < b.terms.size(); ++j)
        out.terms.push_back({c * b.terms[j].coeff, mono_mul(shift, b.terms[j].mono), b.terms[j].comp});
    return out;
}

void mod_make_primitive(ModPoly& p) {
    if (p.is_zero()) return;
    Int num(0), den(1);
    for (const auto& t : p.terms) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num().get_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den().get_mpz_t());
    }
    Rat c(num, den);
    c.canonicalize();
    if (p.lead().coeff < 0) c = -c;
    for (auto& t : p.terms) t.coeff /= c;
}

int mod_sugar(const ModPoly& p) {
    int d = 0;
    for (const auto& t : p.terms) d = std::max(d, t.mono.degree);
    return d;
}

void check_deadline(const GBOptions& opts) {
    if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline)
        throw ComputationTimeout(opts.stage);
}

// top_only stops at the first irreducible lead term instead of reducing the
// whole tail; enough for the Buchberger loop, where only heads drive pairs.
ModPoly mod_reduce(const ModOrder& O, ModPoly work, const std::vector<ModPoly>& basis, const GBOptions& opts,
                   int* sugar = nullptr, bool top_only = false) {
    // bucket the reducers by lead component once per call
    std::vector<std::vector<int>> by_comp;
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
        const ModPoly& g = basis[static_cast<std::size_t>(k)];
        if (g.is_zero()) continue;
        int c = g.lead().comp;
        if (c >= static_cast<int>(by_comp.size())) by_comp.resize(static_cast<std::size_t>(c) + 1);
        by_comp[static_cast<std::size_t>(c)].push_back(k);
    }
    std::vector<ModTerm> done;
    std::size_t pos = 0;
    long steps = 0;
    while (pos < work.terms.size()) {
        if (((++steps) & 0x3f) == 0) check_deadline(opts);
        const ModTerm& lt = work.terms[pos];
        int best = -1;
        std::size_t best_size = 0;
        if (lt.comp < static_cast<int>(by_comp.size()))
            for (int k : by_comp[static_cast<std::size_t>(lt.comp)]) {
                const ModPoly& g = basis[static_cast<std::size_t>(k)];
                if (!mono_divides(g.lead().mono, lt.mono)) continue;
                if (best < 0 || g.terms.size() < best_size) {
                    best = k;
                    best_size = g.terms.size();
                }
            }
        if (best < 0) {
            if (top_only) break;
            done.push_back(lt);
            ++pos;
            continue;
        }
        const ModPoly& g = basis[static_cast<std::size_t>(best)];
        Monomial shift = mono_div(lt.mono, g.lead().mono);
        Rat c = -lt.coeff / g.lead().coeff;
        if (sugar) *sugar = std::max(*sugar, shift.degree + mod_sugar(g));
        work = mod_axpy_tail(O, work, pos, c, shift, g);
        pos = 0;
    }
    ModPoly out;
    out.terms = std::move(done);
    for (std::size_t k = pos; k < work.terms.size(); ++k) out.terms.push_back(std::move(work.terms[k]));
    return out;
}

// Module Buchberger with the chain criteria; the product criterion is not
// valid for modules and is disabled.
//
// When pair_floor >= 0 the engine runs in generators-only mode for the
// components at or above the floor: pairs between two elements whose leads
// both live in that block are skipped.  Processing them would complete a
// Groebner basis of that block's submodule, but the elements produced by
// reducing the dominant-block pairs already generate it, which is all the
// kernel and syzygy extraction needs.  In that mode the floor block is also
// exempt from lead-divisibility pruning, since without the basis property a
// divisible lead does not make an element redundant.
// A sugar_cap >= 0 abandons the completion once every remaining pair exceeds
// that sugar degree; the basis then generates only the low-degree slice.
class ModEngine {
public:
    ModEngine(const ModOrder& O, const GBOptions& opts, int pair_floor = -1, int sugar_cap = -1)
        : O_(O), opts_(opts), pair_floor_(pair_floor), sugar_cap_(sugar_cap) {}

    void add_input(ModPoly f) {
        if (f.is_zero()) return;
        int sug = mod_sugar(f);
        ModPoly h = mod_reduce(O_, std::move(f), polys_, opts_, &sug);
        if (h.is_zero()) return;
        mod_make_primitive(h);
        insert(std::move(h), sug);
    }

    void run() {
        while (!pairs_.empty()) {
            check_deadline(opts_);
            PairRec pr = *pairs_.begin();
            if (sugar_cap_ >= 0 && pr.sugar > sugar_cap_) break; // pairs are sugar-sorted
            pairs_.erase(pairs_.begin());
            const ModPoly& f = polys_[static_cast<std::size_t>(pr.i)];
            const ModPoly& g = polys_[static_cast<std::size_t>(pr.j)];
            Monomial df = mono_div(pr.lcm, f.lead().mono);
            Monomial dg = mono_div(pr.lcm, g.lead().mono);
            ModPoly zero;
            ModPoly s = mod_axpy_tail(O_, zero, 0, Rat(1) / f.lead().coeff, df, f);
            s = mod_axpy_tail(O_, s, 0, Rat(-1) / g.lead().coeff, dg, g);
            int sug = pr.sugar;
            ModPoly h = mod_reduce(O_, std::move(s), polys_, opts_, &sug);
            if (h.is_zero()) continue;
            mod_make_primitive(h);
            insert(std::move(h), sug);
            if (opts_.progress) opts_.progress(static_cast<int>(polys_.size()), pairs_.size());
        }
    }

    std::vector<ModPoly> minimal_basis() {
        auto prunable = [&](const ModTerm& l) { return !(pair_floor_ >= 0 && l.comp >= pair_floor_); };
        std::vector<int> keep;
        for (int i = 0; i < static_cast<int>(polys_.size()); ++i) {
            if (redundant_[static_cast<std::size_t>(i)]) continue;
            const auto& li = polys_[static_cast<std::size_t>(i)].lead();
            bool minimal = true;
            if (prunable(li))
                for (int j : keep) {
                    const auto& lj = polys_[static_cast<std::size_t>(j)].lead();
                    if (lj.comp == li.comp && mono_divides(lj.mono, li.mono)) {
                        minimal = false;
                        break;
                    }
                }
            if (!minimal) continue;
            std::vector<int> still;
            for (int j : keep) {
                const auto& lj = polys_[static_cast<std::size_t>(j)].lead();
                if (!(prunable(lj) && li.comp == lj.comp && mono_divides(li.mono, lj.mono))) still.push_back(j);
            }
            still.push_back(i);
            keep = std::move(still);
        }
        std::vector<ModPoly> out;
        for (int j : keep) out.push_back(polys_[static_cast<std::size_t>(j)]);
        for (std::size_t i = 0; i < out.size(); ++i) {
            std::vector<ModPoly> others;
            for (std::size_t j = 0; j < out.size(); ++j)
                if (j != i && !out[j].is_zero()) others.push_back(out[j]);
            ModPoly r = mod_reduce(O_, out[i], others, opts_);
            mod_make_primitive(r);
            out[i] = std::move(r);
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const ModPoly& p) { return p.is_zero(); }), out.end());
        std::sort(out.begin(), out.end(),
                  [&](const ModPoly& a, const ModPoly& b) { return O_.compare(a.lead(), b.lead()) < 0; });
        return out;
    }

private:
    struct PairRec {
        int i, j;
        int comp;
        Monomial lcm;
        int sugar;
    };

    void insert(ModPoly h, int sugar) {
        int t = static_cast<int>(polys_.size());
        const ModTerm& lh = h.lead();

        for (auto it = pairs_.begin(); it != pairs_.end();) {
            if (it->comp == lh.comp) {
                const Monomial& lti = polys_[static_cast<std::size_t>(it->i)].lead().mono;
                const Monomial& ltj = polys_[static_cast<std::size_t>(it->j)].lead().mono;
                if (mono_divides(lh.mono, it->lcm) && mono_lcm(lti, lh.mono) != it->lcm &&
                    mono_lcm(ltj, lh.mono) != it->lcm) {
                    it = pairs_.erase(it);
                    continue;
                }
            }
            ++it;
        }

        struct Cand {
            int i;
            Monomial lcm;
        };
        std::vector<Cand> cands;
        if (!(pair_floor_ >= 0 && lh.comp >= pair_floor_))
            for (int i = 0; i < t; ++i) {
                const ModTerm& li = polys_[static_cast<std::size_t>(i)].lead();
                if (li.comp != lh.comp) continue;
                cands.push_back({i, mono_lcm(li.mono, lh.mono)});
            }
        std::vector<char> dead(cands.size(), 0);
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dead[a]) continue;
            for (std::size_t b = 0; b < cands.size(); ++b) {
                if (a == b || dead[b]) continue;
                if (cands[b].lcm != cands[a].lcm && mono_divides(cands[b].lcm, cands[a].lcm)) {
                    dead[a] = 1;
                    break;
                }
            }
        }
        for (std::size_t a = 0; a < cands.size(); ++a) {
            if (dead[a]) continue;
            for (std::size_t b = a + 1; b < cands.size(); ++b)
                if (!dead[b] && cands[b].lcm == cands[a].lcm) dead[b] = 1;
            const ModPoly& fi = polys_[static_cast<std::size_t>(cands[a].i)];
            int sug = std::max(sugar_[static_cast<std::size_t>(cands[a].i)] +
                                   mono_div(cands[a].lcm, fi.lead().mono).degree,
                               sugar + mono_div(cands[a].lcm, lh.mono).degree);
            pairs_.insert({cands[a].i, t, lh.comp, cands[a].lcm, sug});
        }

        if (!(pair_floor_ >= 0 && lh.comp >= pair_floor_))
            for (int i = 0; i < t; ++i) {
                if (redundant_[static_cast<std::size_t>(i)]) continue;
                const ModTerm& li = polys_[static_cast<std::size_t>(i)].lead();
                if (li.comp == lh.comp && mono_divides(lh.mono, li.mono)) redundant_[static_cast<std::size_t>(i)] = 1;
            }
        polys_.push_back(std::move(h));
        sugar_.push_back(sugar);
        redundant_.push_back(0);
    }

    struct PairLess {
        const ModEngine* eng;
        bool operator()(const PairRec& a, const PairRec& b) const {
            if (a.sugar != b.sugar) return a.sugar < b.sugar;
            if (a.comp != b.comp) return a.comp < b.comp;
            int c = MonomialOrder::grevlex().compare(a.lcm, b.lcm, eng->O_.ring->nvars());
            if (c != 0) return c < 0;
            if (a.j != b.j) return a.j < b.j;
            return a.i < b.i;
        }
    };

    friend struct PairLess;

    ModOrder O_;
    GBOptions opts_;
    int pair_floor_ = -1;
    int sugar_cap_ = -1;
    std::vector<ModPoly> polys_;
    std::vector<int> sugar_;
    std::vector<char> redundant_;
    std::set<PairRec, PairLess> pairs_{PairLess{this}};
};

ModPoly vector_to_modpoly(const ModOrder& O, const PolyVector& v, int comp_offset) {
    std::vector<ModTerm> terms;
    for (int j = 0; j < static_cast<int>(v.size()); ++j)
        for (const auto& t : v[static_cast<std::size_t>(j)].terms()) terms.push_back({t.coeff, t.mono, comp_offset + j});
    return mod_normalize(O, std::move(terms));
}

PolyVector modpoly_to_vector(const RingPtr& ring, const ModPoly& p, int comp_from, int width) {
    PolyVector v(static_cast<std::size_t>(width), Polynomial::zero(ring));
    std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(width));
    for (const auto& t : p.terms) {
        int c = t.comp - comp_from;
        assert(c >= 0 && c < width);
        buckets[static_cast<std::size_t>(c)].push_back({t.coeff, t.mono});
    }
    for (int j = 0; j < width; ++j)
        v[static_cast<std::size_t>(j)] = Polynomial::from_terms(ring, std::move(buckets[static_cast<std::size_t>(j)]));
    return v;
}

// Canonical presentation of a generator list: primitive, deduplicated, sorted.
std::vector<PolyVector> tidy_vectors(const RingPtr& ring, std::vector<PolyVector> gens) {
    auto vec_degree = [](const PolyVector& v) {
        int d = -1;
        for (const auto& p : v) d = std::max(d, p.total_degree());
        return d;
    };
    // scale to a primitive integer vector with positive first nonzero coord
    for (auto& v : gens) {
        Int num(0), den(1);
        bool nonzero = false;
        for (const auto& p : v)
            for (const auto& t : p.terms()) {
                nonzero = true;
                mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num().get_mpz_t());
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den().get_mpz_t());
            }
        if (!nonzero) continue;
        Rat c(num, den);
        c.canonicalize();
        for (auto& p : v) p = p.scaled(Rat(1) / c);
        for (auto& p : v)
            if (!p.is_zero()) {
                if (p.leading_coeff() < 0)
                    for (auto& q : v) q = q.scaled(Rat(-1));
                break;
            }
    }
    gens.erase(std::remove_if(gens.begin(), gens.end(),
                              [](const PolyVector& v) {
                                  for (const auto& p : v)
                                      if (!p.is_zero()) return false;
                                  return true;
                              }),
               gens.end());
    std::sort(gens.begin(), gens.end(), [&](const PolyVector& a, const PolyVector& b) {
        int da = vec_degree(a), db = vec_degree(b);
        if (da != db) return da < db;
        for (std::size_t k = 0; k < a.size(); ++k) {
            std::string fa = format_polynomial(a[k]), fb = format_polynomial(b[k]);
            if (fa != fb) return fa < fb;
        }
        return false;
    });
    gens.erase(std::unique(gens.begin(), gens.end(),
                           [](const PolyVector& a, const PolyVector& b) {
                               for (std::size_t k = 0; k < a.size(); ++k)
                                   if (!(a[k] == b[k])) return false;
                               return true;
                           }),
               gens.end());
    return gens;
}

std::vector<ModPoly> module_groebner(const ModOrder& O, const std::vector<ModPoly>& gens, const GBOptions& opts,
                                     int pair_floor = -1, int sugar_cap = -1) {
    ModEngine eng(O, opts, pair_floor, sugar_cap);
    std::vector<ModPoly> sorted = gens;
    std::stable_sort(sorted.begin(), sorted.end(), [&](const ModPoly& a, const ModPoly& b) {
        if (a.is_zero() || b.is_zero()) return b.is_zero() && !a.is_zero();
        return O.compare(a.lead(), b.lead()) < 0;
    });
    for (auto& g : sorted) eng.add_input(std::move(g));
    eng.run();
    return eng.minimal_basis();
}

} // namespace

namespace {

std::vector<PolyVector> kernel_impl(const PolyMatrix& A, const std::vector<Polynomial>& modulo, int sugar_cap,
                                    const GBOptions& opts) {
    const RingPtr& ring = A.ring;
    ModOrder O(&*ring, {});
    int m = A.rows, n = A.cols;

    std::vector<ModPoly> gens;
    for (int j = 0; j < n; ++j) {
        std::vector<ModTerm> terms;
        for (int i = 0; i < m; ++i)
            for (const auto& t : A.at(i, j).terms()) terms.push_back({t.coeff, t.mono, i});
        terms.push_back({Rat(1), Monomial::one(), m + j});
        gens.push_back(mod_normalize(O, std::move(terms)));
    }
    for (const auto& q : modulo) {
        for (int i = 0; i < m; ++i) {
            std::vector<ModTerm> terms;
            for (const auto& t : q.terms()) terms.push_back({t.coeff, t.mono, i});
            gens.push_back(mod_normalize(O, std::move(terms)));
        }
    }

    // generators-only mode: the tracker block (components >= m) need not be
    // completed to a basis, its generators are enough
    auto gb = module_groebner(O, gens, opts, m, sugar_cap);
    std::vector<PolyVector> kernel;
    for (const auto& g : gb)
        if (!g.is_zero() && g.lead().comp >= m) kernel.push_back(modpoly_to_vector(ring, g, m, n));
    kernel = tidy_vectors(ring, std::move(kernel));

    // Re-verify A.v == 0 modulo P for every generator before handing it out.
    Ideal P(ring, modulo);
    for (const auto& v : kernel) {
        for (int i = 0; i < m; ++i) {
            Polynomial dot = Polynomial::zero(ring);
            for (int j = 0; j < n; ++j) dot = dot + A.at(i, j) * v[static_cast<std::size_t>(j)];
            if (modulo.empty() ? !dot.is_zero() : !ideal_contains(P, dot, opts))
                throw Error("internal error: kernel generator fails verification");
        }
    }
    return kernel;
}

} // namespace

std::vector<PolyVector> kernel_of_matrix(const PolyMatrix& A, const std::vector<Polynomial>& modulo,
                                         const GBOptions& opts) {
    return kernel_impl(A, modulo, -1, opts);
}

std::vector<PolyVector> kernel_elements_bounded(const PolyMatrix& A, const std::vector<Polynomial>& modulo,
                                                int sugar_cap, const GBOptions& opts) {
    if (sugar_cap < 0) throw UsageError("kernel_elements_bounded needs a nonnegative sugar cap");
    return kernel_impl(A, modulo, sugar_cap, opts);
}

std::vector<PolyVector> module_saturate(const RingPtr& ring, const std::vector<PolyVector>& gens,
                                        const Polynomial& f, const GBOptions& opts) {
    if (gens.empty()) return gens;
    if (f.is_constant()) {
        if (f.is_zero()) throw UsageError("module saturation by zero");
        return tidy_vectors(ring, std::vector<PolyVector>(gens));
    }
    int width = static_cast<int>(gens.front().size());

    std::vector<std::string> names = ring->var_names();
    names.push_back("t@");
    int t_index = ring->nvars();
    RingPtr ext = make_ring(std::move(names));
    std::vector<int> up(static_cast<std::size_t>(ring->nvars()));
    for (int v = 0; v < ring->nvars(); ++v) up[static_cast<std::size_t>(v)] = v;
    std::vector<int> down(static_cast<std::size_t>(ring->nvars()) + 1, -1);
    for (int v = 0; v < ring->nvars(); ++v) down[static_cast<std::size_t>(v)] = v;

    ModOrder O(&*ext, {t_index});
    std::vector<ModPoly> mgens;
    for (const auto& v : gens) {
        PolyVector lifted;
        for (const auto& p : v) lifted.push_back(p.map_vars(ext, up));
        mgens.push_back(vector_to_modpoly(O, lifted, 0));
    }
    Polynomial tf1 = Polynomial::variable(ext, t_index) * f.map_vars(ext, up) - Polynomial::constant(ext, 1);
    for (int j = 0; j < width; ++j) {
        std::vector<ModTerm> terms;
        for (const auto& t : tf1.terms()) terms.push_back({t.coeff, t.mono, j});
        mgens.push_back(mod_normalize(O, std::move(terms)));
    }

    auto gb = module_groebner(O, mgens, opts);
    std::vector<PolyVector> out;
    for (const auto& g : gb) {
        bool t_free = true;
        for (const auto& t : g.terms)
            if (t.mono[t_index] != 0) {
                t_free = false;
                break;
            }
        if (!t_free) continue;
        PolyVector v = modpoly_to_vector(ext, g, 0, width);
        PolyVector lowered;
        for (const auto& p : v) lowered.push_back(p.map_vars(ring, down));
        out.push_back(std::move(lowered));
    }
    return tidy_vectors(ring, std::move(out));
}

bool module_contains(const RingPtr& ring, const std::vector<PolyVector>& gens, const PolyVector& v,
                     const GBOptions& opts) {
    ModOrder O(&*ring, {});
    std::vector<ModPoly> mgens;
    for (const auto& g : gens) mgens.push_back(vector_to_modpoly(O, g, 0));
    auto gb = module_groebner(O, mgens, opts);
    ModPoly target = vector_to_modpoly(O, v, 0);
    return mod_reduce(O, std::move(target), gb, opts).is_zero();
}

std::vector<PolyVector> presaturate_kernel(const RingPtr& ring, const std::vector<PolyVector>& gens,
                                           const std::vector<Polynomial>& factors, const GBOptions& opts) {
    if (gens.empty()) return gens;
    int width = static_cast<int>(gens.front().size());
    std::vector<Polynomial> sorted = factors;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Polynomial& a, const Polynomial& b) {
        return a.total_degree() < b.total_degree();
    });
    std::vector<PolyVector> cur = tidy_vectors(ring, std::vector<PolyVector>(gens));
    for (const auto& f : sorted) {
        if (f.is_zero() || f.is_constant()) continue;
        auto next = module_saturate(ring, cur, f, opts);
        // A factor that blows the module up to all of R^width carries no
        // information about the kernel; skip it.
        bool full = true;
        for (int j = 0; j < width && full; ++j) {
            PolyVector unit(static_cast<std::size_t>(width), Polynomial::zero(ring));
            unit[static_cast<std::size_t>(j)] = Polynomial::constant(ring, 1);
            if (!module_contains(ring, next, unit, opts)) full = false;
        }
        if (full) continue;
        cur = std::move(next);
    }
    return cur;
}

std::vector<PolyVector> minimal_generators(const RingPtr& ring, std::vector<PolyVector> gens,
                                           const GBOptions& opts) {
    gens = tidy_vectors(ring, std::move(gens));
    std::vector<PolyVector> kept;
    for (const auto& v : gens) {
        if (!kept.empty() && module_contains(ring, kept, v, opts)) continue;
        kept.push_back(v);
    }
    return kept;
}

} // namespace mlcrit
