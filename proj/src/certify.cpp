#include "mlcrit/certify.hpp"

#include "mlcrit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace mlcrit {

namespace {

std::vector<double> data_as_doubles(const DataVector& u) {
    std::vector<double> v;
    v.reserve(u.u.size());
    for (const Int& ui : u.u) v.push_back(ui.get_d());
    return v;
}

RealMatrix transpose(const RealMatrix& A) {
    RealMatrix T(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) T.at(j, i) = A.at(i, j);
    return T;
}

} // namespace

RealMatrix evaluate_matrix(const PolyMatrix& A, const std::vector<double>& p) {
    RealMatrix M(A.rows, A.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j).evaluate(p);
    return M;
}

double log_likelihood(const DataVector& u, const std::vector<double>& p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.u.size(); ++i) {
        double ui = u.u[i].get_d();
        if (ui != 0.0) acc += ui * std::log(p[i]);
    }
    return acc;
}

std::vector<double> lagrange_multipliers(const std::vector<double>& p_star, const DataVector& u,
                                         const RealMatrix& jt_at_p, double tol) {
    if (static_cast<int>(p_star.size()) != jt_at_p.cols())
        throw UsageError("point length does not match the Jacobian");
    if (u.u.size() != p_star.size()) throw UsageError("data length does not match the point");
    std::vector<double> rhs = data_as_doubles(u);
    auto ls = least_squares(transpose(jt_at_p), rhs);
    double unorm = vec_norm(rhs);
    if (ls.residual > tol * unorm) {
        std::ostringstream msg;
        msg << "multiplier system is inconsistent (residual " << ls.residual << " vs " << tol * unorm
            << "); the point does not satisfy the critical equations";
        throw ToleranceError(msg.str());
    }
    return ls.x;
}

RestrictedHessian restricted_hessian(const std::vector<double>& p_star, const std::vector<double>& lambda,
                                     const DataVector& u, const ImplicitModel& model) {
    const int nv = model.ring->nvars();
    const int r = static_cast<int>(model.generators.size());
    if (static_cast<int>(p_star.size()) != nv) throw UsageError("point length does not match the model ring");
    if (static_cast<int>(lambda.size()) != r + 1)
        throw UsageError("expected one multiplier per generator plus the simplex multiplier");

    RealMatrix H(nv, nv);
    std::vector<double> ud = data_as_doubles(u);
    for (int j = 0; j < nv; ++j) H.at(j, j) = -ud[static_cast<std::size_t>(j)] / (p_star[static_cast<std::size_t>(j)] * p_star[static_cast<std::size_t>(j)]);
    for (int i = 0; i < r; ++i) {
        const Polynomial& g = model.generators[static_cast<std::size_t>(i)];
        double li = lambda[static_cast<std::size_t>(i) + 1];
        if (li == 0.0) continue;
        for (int j = 0; j < nv; ++j) {
            Polynomial gj = g.differentiate(j);
            for (int k = j; k < nv; ++k) {
                double v = li * gj.differentiate(k).evaluate(p_star);
                H.at(j, k) -= v;
                if (k != j) H.at(k, j) -= v;
            }
        }
    }

    RealMatrix J(r + 1, nv);
    for (int j = 0; j < nv; ++j) J.at(0, j) = 1.0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < nv; ++j)
            J.at(i + 1, j) = model.generators[static_cast<std::size_t>(i)].differentiate(j).evaluate(p_star);
    RealMatrix B = nullspace(J);
    int expected = nv - 1 - model.codim;
    if (B.cols() != expected) {
        std::ostringstream msg;
        msg << "tangent space at the point has dimension " << B.cols() << ", expected " << expected
            << "; the point is too close to the singular locus";
        throw ToleranceError(msg.str());
    }

    RealMatrix S(B.cols(), B.cols());
    for (int a = 0; a < B.cols(); ++a)
        for (int b = 0; b < B.cols(); ++b) {
            double s = 0.0;
            for (int j = 0; j < nv; ++j)
                for (int k = 0; k < nv; ++k) s += B.at(j, a) * H.at(j, k) * B.at(k, b);
            S.at(a, b) = s;
        }
    for (int a = 0; a < S.rows(); ++a)
        for (int b = a + 1; b < S.cols(); ++b) {
            double s = 0.5 * (S.at(a, b) + S.at(b, a));
            S.at(a, b) = s;
            S.at(b, a) = s;
        }
    return {std::move(S), std::move(B)};
}

double definiteness_tolerance(const RealMatrix& H, double rel) {
    double hmax = 0.0;
    for (int i = 0; i < H.rows(); ++i)
        for (int j = 0; j < H.cols(); ++j) hmax = std::max(hmax, std::abs(H.at(i, j)));
    return rel * (1.0 + hmax);
}

Definiteness classify_definiteness(const std::vector<double>& ascending_eigenvalues, double tol) {
    if (ascending_eigenvalues.empty()) return Definiteness::NegativeDefinite; // zero-dimensional tangent space
    double top = ascending_eigenvalues.back();
    if (top < -tol) return Definiteness::NegativeDefinite;
    if (top > tol) return Definiteness::NotMaximum;
    return Definiteness::Inconclusive;
}

MaximizeResult find_local_maxima(const ImplicitModel& model, const DataVector& u, const CertifyOptions& opts) {
    MaximizeResult out;
    out.ideal = likelihood_ideal(model, u, opts.likelihood);
    if (out.ideal.dimension < 0) return out; // empty critical scheme
    out.solve = solve_zero_dim(out.ideal.chart, opts.solver_seed, opts.solve, opts.likelihood.gb);

    PolyMatrix jt = build_augmented_jacobian(model).second;
    for (std::size_t k = 0; k < out.solve.points.size(); ++k) {
        const CriticalPoint& pt = out.solve.points[k];
        if (!pt.is_positive) continue;
        std::vector<double> p(pt.coords.size());
        for (std::size_t i = 0; i < pt.coords.size(); ++i) p[i] = pt.coords[i].real();

        std::vector<double> lambda;
        try {
            lambda = lagrange_multipliers(p, u, evaluate_matrix(jt, p), opts.multiplier_tol);
        } catch (const ToleranceError& e) {
            std::ostringstream msg;
            msg << "point " << k << " skipped: " << e.what();
            out.warnings.push_back(msg.str());
            continue;
        }
        RestrictedHessian rh;
        try {
            rh = restricted_hessian(p, lambda, u, model);
        } catch (const ToleranceError& e) {
            std::ostringstream msg;
            msg << "point " << k << " skipped: " << e.what();
            out.warnings.push_back(msg.str());
            continue;
        }
        std::vector<double> eigs = jacobi_eigenvalues(rh.matrix);
        Definiteness verdict =
            classify_definiteness(eigs, definiteness_tolerance(rh.matrix, opts.definiteness_rel));
        if (verdict == Definiteness::Inconclusive) {
            std::ostringstream msg;
            msg << "point " << k << ": restricted Hessian is too close to singular to certify";
            out.warnings.push_back(msg.str());
            continue;
        }
        if (verdict != Definiteness::NegativeDefinite) continue;

        LocalMaximumReport rep;
        rep.point = std::move(p);
        rep.log_likelihood = log_likelihood(u, rep.point);
        rep.multipliers = std::move(lambda);
        rep.restricted_hessian_eigenvalues = std::move(eigs);
        out.maxima.push_back(std::move(rep));
    }

    std::sort(out.maxima.begin(), out.maxima.end(), [](const LocalMaximumReport& a, const LocalMaximumReport& b) {
        if (a.log_likelihood != b.log_likelihood) return a.log_likelihood > b.log_likelihood;
        return a.point < b.point;
    });
    if (!out.maxima.empty()) out.maxima.front().is_global_among_found = true;
    return out;
}

} // namespace mlcrit
