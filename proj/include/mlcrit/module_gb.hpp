#pragma once

#include "mlcrit/ideal.hpp"
#include "mlcrit/polynomial.hpp"

#include <vector>

namespace mlcrit {

// Dense matrix over a polynomial ring, row-major.
struct PolyMatrix {
    int rows = 0;
    int cols = 0;
    RingPtr ring;
    std::vector<Polynomial> e;

    PolyMatrix() = default;
    PolyMatrix(RingPtr r, int m, int n)
        : rows(m), cols(n), ring(std::move(r)),
          e(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), Polynomial::zero(ring)) {
        for (auto& p : e) p = Polynomial::zero(ring);
    }

    Polynomial& at(int i, int j) { return e[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
    const Polynomial& at(int i, int j) const {
        return e[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }
};

// Determinant by cofactor expansion (matrices here are tiny).
Polynomial poly_det(const PolyMatrix& A);

// Determinant of the submatrix picked out by `rows` x `cols`.
Polynomial poly_minor(const PolyMatrix& A, const std::vector<int>& rows, const std::vector<int>& cols);

// All k x k minors (row/column subsets in lexicographic order).
std::vector<Polynomial> all_minors(const PolyMatrix& A, int k);

// Elements of free modules R^k as plain generator vectors.
using PolyVector = std::vector<Polynomial>;

// Generators of the kernel of the map R^cols -> (R/P)^rows given by A: all v
// with A.v == 0 modulo the ideal generated by `modulo`. Implemented as a
// module Groebner computation in R^(rows+cols) with position-over-term order:
// column j contributes (A_0j, ..., A_{m-1,j}, e_j), each `modulo` generator
// contributes an untracked relation per row, and basis elements supported
// entirely in the tracker block are kernel members. Every returned generator
// is re-verified symbolically.
std::vector<PolyVector> kernel_of_matrix(const PolyMatrix& A, const std::vector<Polynomial>& modulo,
                                         const GBOptions& opts = {});

// Like kernel_of_matrix, but stops the completion at the given sugar degree.
// Every returned vector is a verified kernel element, but the list need not
// generate the whole kernel; useful for harvesting low-degree relations
// cheaply.
std::vector<PolyVector> kernel_elements_bounded(const PolyMatrix& A, const std::vector<Polynomial>& modulo,
                                                int sugar_cap, const GBOptions& opts = {});

// Module saturation (M : f^inf) for the submodule of R^k spanned by gens.
std::vector<PolyVector> module_saturate(const RingPtr& ring, const std::vector<PolyVector>& gens,
                                        const Polynomial& f, const GBOptions& opts = {});

// Saturate by each factor in turn (smallest total degree first); factors whose
// saturation collapses the module to all of R^k are skipped.
std::vector<PolyVector> presaturate_kernel(const RingPtr& ring, const std::vector<PolyVector>& gens,
                                           const std::vector<Polynomial>& factors, const GBOptions& opts = {});

// Membership of v in the submodule spanned by gens.
bool module_contains(const RingPtr& ring, const std::vector<PolyVector>& gens, const PolyVector& v,
                     const GBOptions& opts = {});

// Prune to a minimal generating set: working in increasing degree, drop any
// generator that lies in the module spanned by the ones already kept.
std::vector<PolyVector> minimal_generators(const RingPtr& ring, std::vector<PolyVector> gens,
                                           const GBOptions& opts = {});

} // namespace mlcrit
