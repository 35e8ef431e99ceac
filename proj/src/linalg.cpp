#include "mlcrit/linalg.hpp"

#include "mlcrit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlcrit {

std::vector<cd> mat_vec(const ComplexMatrix& A, const std::vector<cd>& x) {
    std::vector<cd> y(static_cast<std::size_t>(A.rows()));
    for (int i = 0; i < A.rows(); ++i) {
        cd s = 0.0;
        for (int j = 0; j < A.cols(); ++j) s += A.at(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

std::vector<double> mat_vec(const RealMatrix& A, const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(A.rows()));
    for (int i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < A.cols(); ++j) s += A.at(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

double vec_norm(const std::vector<cd>& x) {
    double s = 0.0;
    for (const cd& v : x) s += std::norm(v);
    return std::sqrt(s);
}

double vec_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

namespace {

inline double cabs(const cd& z) { return std::abs(z); }
inline double cabs(double z) { return std::abs(z); }
inline cd conj_of(const cd& z) { return std::conj(z); }
inline double conj_of(double z) { return z; }

template <class T>
T take(const cd& z);
template <>
inline double take<double>(const cd& z) {
    return z.real();
}
template <>
inline cd take<cd>(const cd& z) {
    return z;
}

// Householder QR with column pivoting, shared between the real and complex
// instantiations.
template <class T>
LeastSquaresResult<T> least_squares_impl(DenseMatrix<T> A, std::vector<T> b, double rank_tol) {
    const int m = A.rows(), n = A.cols();
    if (static_cast<int>(b.size()) != m) throw UsageError("least squares: dimension mismatch");
    DenseMatrix<T> A0 = A;
    std::vector<T> b0 = b;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = j;

    std::vector<double> colnorm(static_cast<std::size_t>(n), 0.0);
    auto recompute_norm = [&](int j, int from) {
        double s = 0.0;
        for (int i = from; i < m; ++i) s += std::norm(cd(A.at(i, j)));
        colnorm[static_cast<std::size_t>(j)] = std::sqrt(s);
    };
    for (int j = 0; j < n; ++j) recompute_norm(j, 0);

    const int steps = std::min(m, n);
    std::vector<double> rdiag;
    int k = 0;
    for (; k < steps; ++k) {
        int pivot = k;
        for (int j = k + 1; j < n; ++j)
            if (colnorm[static_cast<std::size_t>(j)] > colnorm[static_cast<std::size_t>(pivot)]) pivot = j;
        if (pivot != k) {
            for (int i = 0; i < m; ++i) std::swap(A.at(i, k), A.at(i, pivot));
            std::swap(colnorm[static_cast<std::size_t>(k)], colnorm[static_cast<std::size_t>(pivot)]);
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pivot)]);
        }

        double xnorm = 0.0;
        for (int i = k; i < m; ++i) xnorm += std::norm(cd(A.at(i, k)));
        xnorm = std::sqrt(xnorm);
        if (!rdiag.empty() && xnorm <= rank_tol * rdiag.front()) break;
        if (rdiag.empty() && xnorm == 0.0) break;

        // Householder vector v = x + sign(x0)|x| e1, stored in place.
        T alpha;
        double x0abs = cabs(A.at(k, k));
        if (x0abs == 0.0)
            alpha = T(xnorm);
        else
            alpha = A.at(k, k) / T(x0abs) * T(xnorm);
        A.at(k, k) += alpha;
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) vnorm2 += std::norm(cd(A.at(i, k)));
        if (vnorm2 == 0.0) {
            rdiag.push_back(0.0);
            continue;
        }

        // Apply I - 2 v v^H / |v|^2 to the trailing columns and to b.
        for (int j = k + 1; j < n; ++j) {
            cd dot = 0.0;
            for (int i = k; i < m; ++i) dot += cd(conj_of(A.at(i, k))) * cd(A.at(i, j));
            cd f = 2.0 * dot / vnorm2;
            for (int i = k; i < m; ++i) A.at(i, j) -= take<T>(f * cd(A.at(i, k)));
        }
        {
            cd dot = 0.0;
            for (int i = k; i < m; ++i) dot += cd(conj_of(A.at(i, k))) * cd(b[static_cast<std::size_t>(i)]);
            cd f = 2.0 * dot / vnorm2;
            for (int i = k; i < m; ++i) b[static_cast<std::size_t>(i)] -= take<T>(f * cd(A.at(i, k)));
        }
        // R(k,k) = -alpha; the subdiagonal part of column k now stores v.
        rdiag.push_back(cabs(alpha));
        A.at(k, k) = -alpha;
        for (int j = k + 1; j < n; ++j) recompute_norm(j, k + 1);
    }

    int rank = k;
    LeastSquaresResult<T> res;
    res.rank = rank;
    std::vector<T> y(static_cast<std::size_t>(n), T(0));
    for (int i = rank - 1; i >= 0; --i) {
        cd s = cd(b[static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < rank; ++j) s -= cd(A.at(i, j)) * cd(y[static_cast<std::size_t>(j)]);
        y[static_cast<std::size_t>(i)] = take<T>(s / cd(A.at(i, i)));
    }
    res.x.assign(static_cast<std::size_t>(n), T(0));
    for (int j = 0; j < n; ++j) res.x[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])] = y[static_cast<std::size_t>(j)];

    std::vector<T> r = b0;
    for (int i = 0; i < m; ++i) {
        cd s = cd(r[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j) s -= cd(A0.at(i, j)) * cd(res.x[static_cast<std::size_t>(j)]);
        r[static_cast<std::size_t>(i)] = take<T>(s);
    }
    res.residual = vec_norm(r);
    return res;
}

} // namespace

LeastSquaresResult<double> least_squares(RealMatrix A, std::vector<double> b, double rank_tol) {
    return least_squares_impl<double>(std::move(A), std::move(b), rank_tol);
}

LeastSquaresResult<cd> least_squares(ComplexMatrix A, std::vector<cd> b, double rank_tol) {
    return least_squares_impl<cd>(std::move(A), std::move(b), rank_tol);
}

namespace {

// Diagonal similarity scaling with powers of two; returns the scale factors.
std::vector<double> balance(ComplexMatrix& A) {
    const int n = A.rows();
    std::vector<double> scale(static_cast<std::size_t>(n), 1.0);
    bool converged = false;
    for (int pass = 0; pass < 8 && !converged; ++pass) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                r += std::abs(A.at(i, j));
                c += std::abs(A.at(j, i));
            }
            if (r == 0.0 || c == 0.0) continue;
            double f = 1.0;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c > r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (f != 1.0) {
                converged = false;
                scale[static_cast<std::size_t>(i)] *= f;
                for (int j = 0; j < n; ++j) A.at(i, j) /= f;
                for (int j = 0; j < n; ++j) A.at(j, i) *= f;
            }
        }
    }
    return scale;
}

void hessenberg(ComplexMatrix& A, ComplexMatrix& Q) {
    const int n = A.rows();
    Q = ComplexMatrix::identity(n);
    for (int k = 0; k < n - 2; ++k) {
        double xnorm = 0.0;
        for (int i = k + 1; i < n; ++i) xnorm += std::norm(A.at(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        cd x0 = A.at(k + 1, k);
        cd alpha = (std::abs(x0) == 0.0) ? cd(xnorm) : x0 / std::abs(x0) * xnorm;
        std::vector<cd> v(static_cast<std::size_t>(n), 0.0);
        for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] = A.at(i, k);
        v[static_cast<std::size_t>(k + 1)] += alpha;
        double vn2 = 0.0;
        for (int i = k + 1; i < n; ++i) vn2 += std::norm(v[static_cast<std::size_t>(i)]);
        if (vn2 == 0.0) continue;
        // A <- P A P with P = I - 2 v v^H / |v|^2
        for (int j = 0; j < n; ++j) {
            cd dot = 0.0;
            for (int i = k + 1; i < n; ++i) dot += std::conj(v[static_cast<std::size_t>(i)]) * A.at(i, j);
            cd f = 2.0 * dot / vn2;
            for (int i = k + 1; i < n; ++i) A.at(i, j) -= f * v[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {
            cd dot = 0.0;
            for (int j = k + 1; j < n; ++j) dot += A.at(i, j) * v[static_cast<std::size_t>(j)];
            cd f = 2.0 * dot / vn2;
            for (int j = k + 1; j < n; ++j) A.at(i, j) -= f * std::conj(v[static_cast<std::size_t>(j)]);
        }
        for (int i = 0; i < n; ++i) {
            cd dot = 0.0;
            for (int j = k + 1; j < n; ++j) dot += Q.at(i, j) * v[static_cast<std::size_t>(j)];
            cd f = 2.0 * dot / vn2;
            for (int j = k + 1; j < n; ++j) Q.at(i, j) -= f * std::conj(v[static_cast<std::size_t>(j)]);
        }
    }
}

struct Givens {
    double c;
    cd s;
};

Givens make_givens(const cd& a, const cd& b) {
    double aa = std::abs(a), bb = std::abs(b);
    if (bb == 0.0) return {1.0, 0.0};
    if (aa == 0.0) return {0.0, cd(1.0, 0.0)};
    double d = std::hypot(aa, bb);
    cd phase = a / aa;
    return {aa / d, phase * std::conj(b) / d};
}

} // namespace

SchurResult schur_decompose(ComplexMatrix A) {
    const int n = A.rows();
    if (n != A.cols()) throw UsageError("schur: matrix must be square");
    SchurResult out;
    if (n == 0) {
        out.T = A;
        out.Q = A;
        return out;
    }
    std::vector<double> scale = balance(A);
    ComplexMatrix Q;
    hessenberg(A, Q);

    const double eps = std::numeric_limits<double>::epsilon();
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) anorm = std::max(anorm, std::abs(A.at(i, j)));
    if (anorm == 0.0) anorm = 1.0;

    int hi = n - 1;
    long iters = 0, since_deflate = 0;
    const long max_iters = 120L * n + 200;
    while (hi > 0) {
        if (++iters > max_iters) throw ToleranceError("eigenvalue iteration failed to converge");
        // Deflate negligible subdiagonals.
        int lo = hi;
        while (lo > 0) {
            double sub = std::abs(A.at(lo, lo - 1));
            double local = std::abs(A.at(lo - 1, lo - 1)) + std::abs(A.at(lo, lo));
            if (local == 0.0) local = anorm;
            if (sub <= eps * local) {
                A.at(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflate = 0;
            continue;
        }

        // Wilkinson shift from the trailing 2x2 block.
        cd a = A.at(hi - 1, hi - 1), b = A.at(hi - 1, hi), c = A.at(hi, hi - 1), d = A.at(hi, hi);
        cd tr2 = (a + d) / 2.0;
        cd disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
        cd mu1 = tr2 + disc, mu2 = tr2 - disc;
        cd mu = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;
        if (++since_deflate % 24 == 0) mu = d + cd(1.5 * std::abs(A.at(hi, hi - 1)), 0.0);

        // One explicit shifted QR sweep on the active window: factor the
        // shifted block with left rotations, then multiply them back on the
        // right, which restores Hessenberg form one subdiagonal at a time.
        for (int i = lo; i <= hi; ++i) A.at(i, i) -= mu;
        std::vector<Givens> rot(static_cast<std::size_t>(hi - lo));
        for (int i = lo; i < hi; ++i) {
            Givens g = make_givens(A.at(i, i), A.at(i + 1, i));
            rot[static_cast<std::size_t>(i - lo)] = g;
            for (int j = i; j < n; ++j) {
                cd t1 = A.at(i, j), t2 = A.at(i + 1, j);
                A.at(i, j) = g.c * t1 + g.s * t2;
                A.at(i + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
            }
            A.at(i + 1, i) = 0.0;
        }
        for (int i = lo; i < hi; ++i) {
            const Givens& g = rot[static_cast<std::size_t>(i - lo)];
            int bottom = std::min(i + 1, hi);
            for (int r = 0; r <= bottom; ++r) {
                cd t1 = A.at(r, i), t2 = A.at(r, i + 1);
                A.at(r, i) = g.c * t1 + std::conj(g.s) * t2;
                A.at(r, i + 1) = -g.s * t1 + g.c * t2;
            }
            for (int r = 0; r < n; ++r) {
                cd t1 = Q.at(r, i), t2 = Q.at(r, i + 1);
                Q.at(r, i) = g.c * t1 + std::conj(g.s) * t2;
                Q.at(r, i + 1) = -g.s * t1 + g.c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) A.at(i, i) += mu;
    }

    // Undo the balancing in the accumulated transform: A_orig = D A D^-1,
    // so eigenvectors of A_orig are D times those of the balanced matrix.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Q.at(i, j) *= scale[static_cast<std::size_t>(i)];

    out.eigenvalues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.eigenvalues[static_cast<std::size_t>(i)] = A.at(i, i);
    out.T = std::move(A);
    out.Q = std::move(Q);
    return out;
}

std::vector<cd> schur_eigenvector(const SchurResult& s, int k) {
    const int n = s.T.rows();
    const double eps = std::numeric_limits<double>::epsilon();
    double tnorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) tnorm = std::max(tnorm, std::abs(s.T.at(i, j)));
    if (tnorm == 0.0) tnorm = 1.0;

    std::vector<cd> y(static_cast<std::size_t>(n), 0.0);
    cd lambda = s.T.at(k, k);
    y[static_cast<std::size_t>(k)] = 1.0;
    for (int i = k - 1; i >= 0; --i) {
        cd acc = 0.0;
        for (int j = i + 1; j <= k; ++j) acc += s.T.at(i, j) * y[static_cast<std::size_t>(j)];
        cd den = s.T.at(i, i) - lambda;
        if (std::abs(den) < eps * tnorm) den = cd(eps * tnorm, 0.0);
        y[static_cast<std::size_t>(i)] = -acc / den;
    }
    std::vector<cd> v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        cd acc = 0.0;
        for (int j = 0; j <= k; ++j) acc += s.Q.at(i, j) * y[static_cast<std::size_t>(j)];
        v[static_cast<std::size_t>(i)] = acc;
    }
    double nv = vec_norm(v);
    if (nv > 0)
        for (auto& z : v) z /= nv;
    return v;
}

std::vector<double> jacobi_eigenvalues(RealMatrix S) {
    const int n = S.rows();
    if (n != S.cols()) throw UsageError("jacobi: matrix must be square");
    double fnorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fnorm += S.at(i, j) * S.at(i, j);
    fnorm = std::sqrt(fnorm);
    const double tol = 1e-15 * (fnorm > 0 ? fnorm : 1.0);

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += 2.0 * S.at(p, q) * S.at(p, q);
        if (std::sqrt(off) <= tol) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = S.at(p, q);
                if (std::abs(apq) <= tol / (n * n)) continue;
                double tau = (S.at(q, q) - S.at(p, p)) / (2.0 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double sip = S.at(i, p), siq = S.at(i, q);
                    S.at(i, p) = c * sip - s * siq;
                    S.at(i, q) = s * sip + c * siq;
                }
                for (int i = 0; i < n; ++i) {
                    double spi = S.at(p, i), sqi = S.at(q, i);
                    S.at(p, i) = c * spi - s * sqi;
                    S.at(q, i) = s * spi + c * sqi;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = S.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

RealMatrix nullspace(const RealMatrix& A, double rank_tol) {
    const int m = A.rows(), n = A.cols();
    RealMatrix R = A;
    double scale = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(R.at(i, j)));
    if (scale == 0.0) scale = 1.0;
    const double tol = rank_tol * scale;

    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int piv = row;
        for (int i = row + 1; i < m; ++i)
            if (std::abs(R.at(i, col)) > std::abs(R.at(piv, col))) piv = i;
        if (std::abs(R.at(piv, col)) <= tol) continue;
        if (piv != row)
            for (int j = 0; j < n; ++j) std::swap(R.at(piv, j), R.at(row, j));
        double d = R.at(row, col);
        for (int j = 0; j < n; ++j) R.at(row, j) /= d;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = R.at(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) R.at(i, j) -= f * R.at(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }

    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = 1;
    std::vector<std::vector<double>> basis;
    for (int col = 0; col < n; ++col) {
        if (is_pivot[static_cast<std::size_t>(col)]) continue;
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(col)] = 1.0;
        for (std::size_t pr = 0; pr < pivot_col.size(); ++pr)
            v[static_cast<std::size_t>(pivot_col[pr])] = -R.at(static_cast<int>(pr), col);
        basis.push_back(std::move(v));
    }

    // Modified Gram-Schmidt.
    std::vector<std::vector<double>> ortho;
    for (auto& v : basis) {
        for (const auto& u : ortho) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] -= dot * u[static_cast<std::size_t>(i)];
        }
        double nv = vec_norm(v);
        if (nv <= 1e-14) continue;
        for (auto& x : v) x /= nv;
        ortho.push_back(v);
    }

    RealMatrix B(n, static_cast<int>(ortho.size()));
    for (int j = 0; j < B.cols(); ++j)
        for (int i = 0; i < n; ++i) B.at(i, j) = ortho[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return B;
}

} // namespace mlcrit
