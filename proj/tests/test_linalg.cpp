#include <doctest.h>

#include "mlcrit/linalg.hpp"
#include "mlcrit/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

using namespace mlcrit;

namespace {

RealMatrix real_mat(int m, int n, std::initializer_list<double> e) {
    RealMatrix A(m, n);
    auto it = e.begin();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) A.at(i, j) = *it++;
    return A;
}

ComplexMatrix complex_mat(int m, int n, std::initializer_list<cd> e) {
    ComplexMatrix A(m, n);
    auto it = e.begin();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) A.at(i, j) = *it++;
    return A;
}

double eigen_residual(const ComplexMatrix& A, const std::vector<cd>& v, cd lambda) {
    std::vector<cd> Av = mat_vec(A, v);
    for (std::size_t i = 0; i < Av.size(); ++i) Av[i] -= lambda * v[i];
    return vec_norm(Av);
}

} // namespace

TEST_SUITE("linalg") {

TEST_CASE("least squares reproduces the exact solution of a square system") {
    // 2x + y = 5, x + 3y = 10  =>  x = 1, y = 3
    RealMatrix A = real_mat(2, 2, {2, 1, 1, 3});
    auto r = least_squares(A, {5, 10});
    REQUIRE(r.rank == 2);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.x[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.residual < 1e-12);
}

TEST_CASE("least squares matches the normal-equation solution of a tall system") {
    // Fit y = a + b t through (0,1), (1,2), (2,4): normal equations give
    // a = 5/6, b = 3/2 (worked by hand from A^T A [a b]^T = A^T y).
    RealMatrix A = real_mat(3, 2, {1, 0, 1, 1, 1, 2});
    auto r = least_squares(A, {1, 2, 4});
    REQUIRE(r.rank == 2);
    CHECK(r.x[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(r.x[1] == doctest::Approx(1.5).epsilon(1e-12));
    // residual vector is (1/6, -1/3, 1/6), norm = sqrt(1/6)
    CHECK(r.residual == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-10));
}

TEST_CASE("least squares detects rank deficiency and still minimizes") {
    // Second column is twice the first.
    RealMatrix A = real_mat(3, 2, {1, 2, 1, 2, 1, 2});
    auto r = least_squares(A, {1, 1, 4});
    CHECK(r.rank == 1);
    // Projection of b onto span{(1,1,1)} leaves residual norm sqrt(6).
    CHECK(r.residual == doctest::Approx(std::sqrt(6.0)).epsilon(1e-10));
    CHECK(r.x[0] + 2.0 * r.x[1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("complex least squares solves a Hermitian-compatible system") {
    ComplexMatrix A = complex_mat(2, 2, {cd(1, 1), cd(0, 0), cd(2, 0), cd(0, 1)});
    std::vector<cd> x_true = {cd(3, -2), cd(1, 5)};
    std::vector<cd> b = mat_vec(A, x_true);
    auto r = least_squares(A, b);
    REQUIRE(r.rank == 2);
    CHECK(std::abs(r.x[0] - x_true[0]) < 1e-12);
    CHECK(std::abs(r.x[1] - x_true[1]) < 1e-12);
    CHECK(r.residual < 1e-12);
}

TEST_CASE("random overdetermined systems satisfy the normal equations") {
    Rng rng(2718);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 4 + static_cast<int>(rng.uniform(0, 4));
        int n = 2 + static_cast<int>(rng.uniform(0, 2));
        RealMatrix A(m, n);
        std::vector<double> b(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) A.at(i, j) = static_cast<double>(rng.uniform_signed(-9, 9)) / 3.0;
            b[static_cast<std::size_t>(i)] = static_cast<double>(rng.uniform_signed(-9, 9)) / 3.0;
        }
        auto r = least_squares(A, b);
        if (r.rank < n) continue;
        // A^T (A x - b) = 0 at the minimizer.
        std::vector<double> res = mat_vec(A, r.x);
        for (int i = 0; i < m; ++i) res[static_cast<std::size_t>(i)] -= b[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            double g = 0.0;
            for (int i = 0; i < m; ++i) g += A.at(i, j) * res[static_cast<std::size_t>(i)];
            CHECK(std::abs(g) < 1e-9);
        }
        CHECK(std::abs(vec_norm(res) - r.residual) < 1e-9);
    }
}

TEST_CASE("schur recovers the eigenvalues of a diagonal-plus-nilpotent matrix") {
    ComplexMatrix A = complex_mat(3, 3,
                                  {cd(3, 0), cd(1, 0), cd(0, 0),
                                   cd(0, 0), cd(-1, 0), cd(2, 0),
                                   cd(0, 0), cd(0, 0), cd(5, 0)});
    auto s = schur_decompose(A);
    std::vector<double> got;
    for (const cd& z : s.eigenvalues) {
        CHECK(std::abs(z.imag()) < 1e-10);
        got.push_back(z.real());
    }
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(got[2] == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("schur handles a rotation matrix with conjugate eigenvalues") {
    // [[0,-1],[1,0]] has eigenvalues +-i.
    ComplexMatrix A = complex_mat(2, 2, {cd(0, 0), cd(-1, 0), cd(1, 0), cd(0, 0)});
    auto s = schur_decompose(A);
    std::vector<cd> ev = s.eigenvalues;
    std::sort(ev.begin(), ev.end(), [](const cd& a, const cd& b) { return a.imag() < b.imag(); });
    CHECK(std::abs(ev[0] - cd(0, -1)) < 1e-12);
    CHECK(std::abs(ev[1] - cd(0, 1)) < 1e-12);
    for (int k = 0; k < 2; ++k) {
        std::vector<cd> v = schur_eigenvector(s, k);
        CHECK(eigen_residual(A, v, s.eigenvalues[static_cast<std::size_t>(k)]) < 1e-12);
    }
}

TEST_CASE("schur eigenvalues of a companion matrix are the polynomial roots") {
    // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
    ComplexMatrix A(3, 3);
    A.at(0, 2) = cd(6, 0);
    A.at(1, 2) = cd(-11, 0);
    A.at(2, 2) = cd(6, 0);
    A.at(1, 0) = cd(1, 0);
    A.at(2, 1) = cd(1, 0);
    auto s = schur_decompose(A);
    std::vector<double> got;
    for (const cd& z : s.eigenvalues) {
        CHECK(std::abs(z.imag()) < 1e-8);
        got.push_back(z.real());
    }
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(got[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(got[2] == doctest::Approx(3.0).epsilon(1e-8));
    for (int k = 0; k < 3; ++k) {
        std::vector<cd> v = schur_eigenvector(s, k);
        CHECK(eigen_residual(A, v, s.eigenvalues[static_cast<std::size_t>(k)]) < 1e-9);
    }
}

TEST_CASE("schur eigenvectors of random matrices satisfy the eigen equation") {
    Rng rng(10946);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform(0, 5));
        ComplexMatrix A(n, n);
        double scale = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                A.at(i, j) = cd(static_cast<double>(rng.uniform_signed(-20, 20)),
                                static_cast<double>(rng.uniform_signed(-20, 20)));
                scale = std::max(scale, std::abs(A.at(i, j)));
            }
        auto s = schur_decompose(A);
        REQUIRE(static_cast<int>(s.eigenvalues.size()) == n);
        // The trace is preserved by similarity transforms.
        cd trace = 0.0, evsum = 0.0;
        for (int i = 0; i < n; ++i) trace += A.at(i, i);
        for (const cd& z : s.eigenvalues) evsum += z;
        CHECK(std::abs(trace - evsum) < 1e-8 * (1.0 + scale * n));
        for (int k = 0; k < n; ++k) {
            std::vector<cd> v = schur_eigenvector(s, k);
            CHECK(std::abs(vec_norm(v) - 1.0) < 1e-10);
            CHECK(eigen_residual(A, v, s.eigenvalues[static_cast<std::size_t>(k)]) < 1e-7 * (1.0 + scale * n));
        }
    }
}

TEST_CASE("schur copes with badly scaled entries via balancing") {
    ComplexMatrix A = complex_mat(2, 2, {cd(1, 0), cd(1e8, 0), cd(1e-8, 0), cd(2, 0)});
    // Characteristic polynomial x^2 - 3x + (2 - 1) = 0, roots (3 +- sqrt(5))/2.
    auto s = schur_decompose(A);
    std::vector<double> got;
    for (const cd& z : s.eigenvalues) got.push_back(z.real());
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-9));
    CHECK(got[1] == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-9));
    for (int k = 0; k < 2; ++k) {
        std::vector<cd> v = schur_eigenvector(s, k);
        CHECK(eigen_residual(A, v, s.eigenvalues[static_cast<std::size_t>(k)]) < 1e-6 * 1e8);
    }
}

TEST_CASE("jacobi eigenvalues of a hand-diagonalized symmetric matrix") {
    // [[2,1],[1,2]] has eigenvalues 1 and 3.
    RealMatrix S = real_mat(2, 2, {2, 1, 1, 2});
    auto ev = jacobi_eigenvalues(S);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("jacobi eigenvalues come out ascending and match trace and determinant") {
    Rng rng(833);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform(0, 4));
        RealMatrix S(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = static_cast<double>(rng.uniform_signed(-10, 10));
                S.at(i, j) = v;
                S.at(j, i) = v;
            }
        auto ev = jacobi_eigenvalues(S);
        REQUIRE(static_cast<int>(ev.size()) == n);
        CHECK(std::is_sorted(ev.begin(), ev.end()));
        double trace = 0.0, evsum = 0.0;
        for (int i = 0; i < n; ++i) trace += S.at(i, i);
        for (double v : ev) evsum += v;
        CHECK(evsum == doctest::Approx(trace).epsilon(1e-9));
        // Sum of squares equals the squared Frobenius norm for symmetric S.
        double frob2 = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) frob2 += S.at(i, j) * S.at(i, j);
        for (double v : ev) sq += v * v;
        CHECK(sq == doctest::Approx(frob2).epsilon(1e-9));
    }
}

TEST_CASE("jacobi flags definiteness correctly on known matrices") {
    RealMatrix neg = real_mat(2, 2, {-2, 1, 1, -2});
    auto ev = jacobi_eigenvalues(neg);
    CHECK(ev.back() < 0.0); // negative definite
    RealMatrix ind = real_mat(2, 2, {1, 2, 2, 1});
    ev = jacobi_eigenvalues(ind);
    CHECK(ev.front() < 0.0);
    CHECK(ev.back() > 0.0); // indefinite: eigenvalues -1 and 3
}

TEST_CASE("nullspace of a rank-one matrix is an orthonormal plane") {
    RealMatrix A = real_mat(2, 3, {1, 2, 3, 2, 4, 6});
    RealMatrix B = nullspace(A);
    REQUIRE(B.cols() == 2);
    REQUIRE(B.rows() == 3);
    for (int j = 0; j < B.cols(); ++j) {
        std::vector<double> v(3);
        for (int i = 0; i < 3; ++i) v[static_cast<std::size_t>(i)] = B.at(i, j);
        CHECK(std::abs(vec_norm(v) - 1.0) < 1e-12);
        std::vector<double> Av = mat_vec(A, v);
        CHECK(vec_norm(Av) < 1e-10);
    }
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += B.at(i, 0) * B.at(i, 1);
    CHECK(std::abs(dot) < 1e-12);
}

TEST_CASE("nullspace of a full-rank square matrix is empty") {
    RealMatrix A = real_mat(2, 2, {1, 2, 3, 4});
    RealMatrix B = nullspace(A);
    CHECK(B.cols() == 0);
}

TEST_CASE("nullspace dimension matches construction on random products") {
    Rng rng(4181);
    for (int trial = 0; trial < 10; ++trial) {
        // A = L * R with L m x r, R r x n has rank at most r (equal for
        // generic entries), so the kernel has dimension n - rank.
        int r = 1 + static_cast<int>(rng.uniform(0, 2));
        int m = r + 1 + static_cast<int>(rng.uniform(0, 2));
        int n = r + 1 + static_cast<int>(rng.uniform(0, 3));
        RealMatrix L(m, r), R(r, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < r; ++j) L.at(i, j) = static_cast<double>(rng.uniform_signed(-7, 7)) + 0.25;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) R.at(i, j) = static_cast<double>(rng.uniform_signed(-7, 7)) + 0.5;
        RealMatrix A(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < r; ++k) s += L.at(i, k) * R.at(k, j);
                A.at(i, j) = s;
            }
        RealMatrix B = nullspace(A);
        CHECK(B.cols() >= n - r);
        for (int j = 0; j < B.cols(); ++j) {
            std::vector<double> v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = B.at(i, j);
            std::vector<double> Av = mat_vec(A, v);
            CHECK(vec_norm(Av) < 1e-8 * (1.0 + vec_norm(v)));
        }
        // Pairwise orthonormality.
        for (int a = 0; a < B.cols(); ++a)
            for (int b = a; b < B.cols(); ++b) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += B.at(i, a) * B.at(i, b);
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
            }
    }
}

} // TEST_SUITE
