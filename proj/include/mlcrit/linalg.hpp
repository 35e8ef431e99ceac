#pragma once

#include <complex>
#include <vector>

namespace mlcrit {

using cd = std::complex<double>;

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows_(r), cols_(c), a_(static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {}

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& at(int i, int j) { return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)]; }
    const T& at(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j)];
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<cd>;

std::vector<cd> mat_vec(const ComplexMatrix& A, const std::vector<cd>& x);
std::vector<double> mat_vec(const RealMatrix& A, const std::vector<double>& x);
double vec_norm(const std::vector<cd>& x);
double vec_norm(const std::vector<double>& x);

template <class T>
struct LeastSquaresResult {
    std::vector<T> x;
    int rank = 0;
    double residual = 0.0; // euclidean norm of b - A x
};

// Householder QR with column pivoting; rank-deficient systems get the basic
// solution (free variables zero).
LeastSquaresResult<double> least_squares(RealMatrix A, std::vector<double> b, double rank_tol = 1e-12);
LeastSquaresResult<cd> least_squares(ComplexMatrix A, std::vector<cd> b, double rank_tol = 1e-12);

// Complex Schur decomposition A = Q T Q^H via balancing, Householder
// Hessenberg reduction and shifted QR with Givens rotations.
struct SchurResult {
    ComplexMatrix T;
    ComplexMatrix Q;
    std::vector<cd> eigenvalues; // diag(T), in T's order
};

SchurResult schur_decompose(ComplexMatrix A);

// Right eigenvector of the original matrix for eigenvalue k of the Schur form
// (unit norm).
std::vector<cd> schur_eigenvector(const SchurResult& s, int k);

// Eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, ascending.
std::vector<double> jacobi_eigenvalues(RealMatrix S);

// Orthonormal basis (as matrix columns) for the nullspace of A, via row
// reduction with partial pivoting followed by modified Gram-Schmidt. Entries
// below rank_tol * max|A| are treated as zero.
RealMatrix nullspace(const RealMatrix& A, double rank_tol = 1e-9);

} // namespace mlcrit
