#include "mlcrit/solver.hpp"

#include "mlcrit/errors.hpp"
#include "mlcrit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace mlcrit {

namespace {

struct MonoLess {
    const Ring* ring;
    bool operator()(const Monomial& a, const Monomial& b) const { return ring->compare(a, b) < 0; }
};

// Coordinates of a normal form on the standard-monomial basis.
std::vector<double> basis_coords(const Polynomial& nf, const std::map<Monomial, int, MonoLess>& index, int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    for (const Term& t : nf.terms()) {
        auto it = index.find(t.mono);
        if (it == index.end())
            throw ToleranceError("normal form left the standard-monomial span; the cached basis is inconsistent");
        v[static_cast<std::size_t>(it->second)] = to_double(t.coeff);
    }
    return v;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

// Eigenvalue clusters under the separation cutoff; each cluster is a sorted
// list of Schur indices.
std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<cd>& lambda, double cut) {
    int n = static_cast<int>(lambda.size());
    DisjointSets ds(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)]) <= cut)
                ds.unite(i, j);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[ds.find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    return out;
}

struct PolishOutcome {
    std::vector<cd> z;
    double residual; // max over generators, relative to 1 + coefficient 1-norm
};

double relative_residual(const std::vector<Polynomial>& gens, const std::vector<double>& scales,
                         const std::vector<cd>& z) {
    double worst = 0.0;
    for (std::size_t i = 0; i < gens.size(); ++i)
        worst = std::max(worst, std::abs(gens[i].evaluate(z)) / scales[i]);
    return worst;
}

// Damped Gauss-Newton on the original generators. Overdetermined systems go
// through the least-squares step; for square systems this is plain Newton.
PolishOutcome polish(const std::vector<Polynomial>& gens, const std::vector<std::vector<Polynomial>>& jac,
                     const std::vector<double>& scales, std::vector<cd> z) {
    int m = static_cast<int>(gens.size());
    int nv = static_cast<int>(z.size());
    double best = relative_residual(gens, scales, z);
    std::vector<cd> best_z = z;
    for (int iter = 0; iter < 60 && best > 1e-16; ++iter) {
        std::vector<cd> rhs(static_cast<std::size_t>(m));
        ComplexMatrix J(m, nv);
        for (int i = 0; i < m; ++i) {
            rhs[static_cast<std::size_t>(i)] = -gens[static_cast<std::size_t>(i)].evaluate(best_z);
            for (int j = 0; j < nv; ++j)
                J.at(i, j) = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].evaluate(best_z);
        }
        auto step = least_squares(std::move(J), std::move(rhs));
        double zscale = 1.0 + vec_norm(best_z);
        if (vec_norm(step.x) <= 1e-16 * zscale) break;
        bool improved = false;
        double damp = 1.0;
        for (int k = 0; k < 8; ++k, damp *= 0.5) {
            std::vector<cd> cand(static_cast<std::size_t>(nv));
            for (int j = 0; j < nv; ++j)
                cand[static_cast<std::size_t>(j)] = best_z[static_cast<std::size_t>(j)] + damp * step.x[static_cast<std::size_t>(j)];
            double r = relative_residual(gens, scales, cand);
            if (r < best) {
                best = r;
                best_z = std::move(cand);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return {std::move(best_z), best};
}

bool lex_before(const CriticalPoint& a, const CriticalPoint& b) {
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        if (a.coords[i].real() != b.coords[i].real()) return a.coords[i].real() < b.coords[i].real();
    }
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
        if (a.coords[i].imag() != b.coords[i].imag()) return a.coords[i].imag() < b.coords[i].imag();
    }
    return false;
}

} // namespace

SolveResult solve_zero_dim(const Ideal& I, std::uint64_t seed, const SolveTolerances& tol, const GBOptions& gb) {
    SolveResult result;
    if (is_unit_ideal(I, gb)) {
        result.all_certified = true;
        return result;
    }
    const RingPtr& ring = I.ring();
    int nv = ring->nvars();

    std::vector<Monomial> basis = standard_monomials(I, gb);
    int dim = static_cast<int>(basis.size());
    std::map<Monomial, int, MonoLess> index(MonoLess{ring.get()});
    for (int j = 0; j < dim; ++j) index.emplace(basis[static_cast<std::size_t>(j)], j);
    auto one_it = index.find(Monomial::one());
    if (one_it == index.end())
        throw ToleranceError("standard-monomial basis is missing the constant monomial");
    int idx_one = one_it->second;

    // Per-variable action matrices: action[i][j] holds the coordinates of the
    // normal form of x_i * b_j. The matrix of any linear form is a coefficient
    // combination of these, so separating-form retries cost no new reductions.
    std::vector<std::vector<std::vector<double>>> action(static_cast<std::size_t>(nv));
    for (int i = 0; i < nv; ++i) {
        action[static_cast<std::size_t>(i)].reserve(static_cast<std::size_t>(dim));
        for (int j = 0; j < dim; ++j) {
            Polynomial prod = Polynomial::monomial(
                ring, Rat(1), mono_mul(Monomial::var(i), basis[static_cast<std::size_t>(j)]));
            action[static_cast<std::size_t>(i)].push_back(basis_coords(normal_form(prod, I, gb), index, dim));
        }
    }

    Rng rng(seed);
    const int max_retries = 5;
    SchurResult schur;
    std::vector<std::vector<int>> clusters;
    std::size_t best_cluster_count = 0;
    bool separated = false;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::vector<double> coeff(static_cast<std::size_t>(nv));
        bool all_zero = true;
        do {
            for (int i = 0; i < nv; ++i) {
                coeff[static_cast<std::size_t>(i)] = static_cast<double>(rng.uniform_signed(-50, 50));
                if (coeff[static_cast<std::size_t>(i)] != 0.0) all_zero = false;
            }
        } while (all_zero);

        // Transpose of the multiplication matrix: its eigenvectors evaluate
        // the basis monomials at the zeros.
        ComplexMatrix mt(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) {
                double s = 0.0;
                for (int i = 0; i < nv; ++i)
                    s += coeff[static_cast<std::size_t>(i)] *
                         action[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                mt.at(j, k) = s;
            }

        SchurResult cand = schur_decompose(std::move(mt));
        double scale = 0.0;
        for (const cd& ev : cand.eigenvalues) scale = std::max(scale, std::abs(ev));
        auto cand_clusters = cluster_eigenvalues(cand.eigenvalues, 1e-6 * (1.0 + scale));
        if (cand_clusters.size() > best_cluster_count) {
            best_cluster_count = cand_clusters.size();
            schur = std::move(cand);
            clusters = std::move(cand_clusters);
        }
        result.separating_retries = attempt;
        if (best_cluster_count == static_cast<std::size_t>(dim)) {
            separated = true;
            break;
        }
    }
    if (!separated && dim > 0) {
        std::ostringstream msg;
        msg << "eigenvalues were not pairwise separated after " << max_retries
            << " separating-form retries; reporting " << clusters.size() << " cluster(s) with multiplicity";
        result.warnings.push_back(msg.str());
    }

    // Variable values come from the eigenvector through the normal-form
    // coordinates of each variable, normalized by the entry of the constant
    // monomial.
    const std::vector<Polynomial>& gens = I.generators();
    std::vector<double> scales;
    scales.reserve(gens.size());
    for (const Polynomial& g : gens) scales.push_back(1.0 + g.coeff_one_norm());
    std::vector<std::vector<Polynomial>> jac(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        jac[i].reserve(static_cast<std::size_t>(nv));
        for (int j = 0; j < nv; ++j) jac[i].push_back(gens[i].differentiate(j));
    }

    for (const std::vector<int>& cluster : clusters) {
        int rep = *std::min_element(cluster.begin(), cluster.end());
        std::vector<cd> w = schur_eigenvector(schur, rep);
        cd w0 = w[static_cast<std::size_t>(idx_one)];
        if (std::abs(w0) < 1e-13) w0 = cd(1e-13, 0.0); // degenerate seed, the polish has to rescue it
        std::vector<cd> z(static_cast<std::size_t>(nv));
        for (int i = 0; i < nv; ++i) {
            const std::vector<double>& ni = action[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx_one)];
            cd dot(0.0, 0.0);
            for (int k = 0; k < dim; ++k) dot += ni[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
            z[static_cast<std::size_t>(i)] = dot / w0;
        }
        PolishOutcome out = polish(gens, jac, scales, std::move(z));

        double pscale = 0.0;
        for (const cd& c : out.z) pscale = std::max(pscale, std::abs(c));
        double merge_eps = 1e-7 * (1.0 + pscale);
        bool merged = false;
        for (CriticalPoint& pt : result.points) {
            bool close = true;
            for (int i = 0; i < nv && close; ++i)
                close = std::abs(pt.coords[static_cast<std::size_t>(i)] - out.z[static_cast<std::size_t>(i)]) <= merge_eps;
            if (close) {
                pt.multiplicity += static_cast<int>(cluster.size());
                if (out.residual < pt.residual) {
                    pt.coords = std::move(out.z);
                    pt.residual = out.residual;
                }
                merged = true;
                break;
            }
        }
        if (merged) continue;
        CriticalPoint pt;
        pt.coords = std::move(out.z);
        pt.residual = out.residual;
        pt.multiplicity = static_cast<int>(cluster.size());
        result.points.push_back(std::move(pt));
    }

    for (CriticalPoint& pt : result.points) {
        pt.is_real = true;
        for (const cd& c : pt.coords) {
            double cut = tol.imag * (1.0 + std::abs(c));
            double im = std::abs(c.imag());
            if (im > cut) pt.is_real = false;
            if (im >= 0.1 * cut && im <= 10.0 * cut) pt.borderline = true;
        }
        pt.is_positive = pt.is_real;
        if (pt.is_real)
            for (const cd& c : pt.coords) {
                if (c.real() <= tol.positive) pt.is_positive = false;
                if (std::abs(c.real()) <= 10.0 * tol.positive) pt.borderline = true;
            }
    }

    std::sort(result.points.begin(), result.points.end(), lex_before);

    result.all_certified = true;
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const CriticalPoint& pt = result.points[i];
        result.total_multiplicity += pt.multiplicity;
        if (pt.residual > tol.residual) {
            result.all_certified = false;
            std::ostringstream msg;
            msg << "point " << i << " residual " << pt.residual << " exceeds tolerance " << tol.residual;
            result.warnings.push_back(msg.str());
        }
        if (pt.borderline) {
            std::ostringstream msg;
            msg << "point " << i << " has a coordinate within 10x of a classification tolerance";
            result.warnings.push_back(msg.str());
        }
    }
    return result;
}

Classification classify_points(const std::vector<CriticalPoint>& points) {
    Classification c;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        if (points[static_cast<std::size_t>(i)].is_positive)
            c.positive_points.push_back(i);
        else if (points[static_cast<std::size_t>(i)].is_real)
            c.real_points.push_back(i);
        else
            c.complex_points.push_back(i);
    }
    return c;
}

} // namespace mlcrit
