#pragma once

#include "mlcrit/ideal.hpp"
#include "mlcrit/module_gb.hpp"
#include "mlcrit/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mlcrit {

// An algebraic statistical model given implicitly: homogeneous polynomials
// g_1..g_r in the state probabilities p_0..p_n.
struct ImplicitModel {
    RingPtr ring;
    std::vector<Polynomial> generators;
    int codim = 0;            // of the vanishing set, as computed from a basis
    std::vector<int> degrees; // total degrees of the generators
};

// Validates homogeneity and computes the codimension.
ImplicitModel make_implicit_model(const RingPtr& ring, std::vector<Polynomial> generators,
                                  const GBOptions& opts = {});

// Observed counts, one per state.
struct DataVector {
    std::vector<Int> u;
    Int total() const;
};

// Checks length, non-negativity and positive total.
DataVector make_data_vector(std::vector<Int> u, int expected_length);

enum class Strategy {
    Auto,   // Minors when the model is a complete intersection, else Syzygy
    Syzygy, // critical equations from the kernel of the scaled Jacobian
    Minors, // critical equations from rank conditions on [u; scaled Jacobian]
};

enum class Step4Mode {
    Full,            // saturate by every factor in turn
    PrimeThenVerify, // one quotient by a random minor, then verify the fixpoint
};

struct LikelihoodOptions {
    Strategy strategy = Strategy::Auto;
    Step4Mode step4 = Step4Mode::PrimeThenVerify;
    bool presaturate_module = false; // saturate the kernel module before use
    std::uint64_t seed = 1;          // drives the random submatrix of Step4' only
    GBOptions gb;
};

// Data-independent work that is shared between data vectors: the singular
// locus minors and (for the syzygy strategy) the kernel module of the scaled
// Jacobian.
struct LikelihoodPrep {
    std::vector<Polynomial> q_minors;   // nonzero minors cutting the singular locus
    std::vector<PolyVector> kernel;     // generators of ker(J~) over R/P
    bool kernel_computed = false;
    bool kernel_presaturated = false;
};

// J is the Jacobian of the generators augmented by a top row of ones,
// (r+1) x (n+1); J~ is J with column j scaled by p_j.
std::pair<PolyMatrix, PolyMatrix> build_augmented_jacobian(const ImplicitModel& model);

// Ideal of the singular locus: the codim x codim minors of the un-augmented
// Jacobian together with the model generators.
Ideal singular_locus_ideal(const ImplicitModel& model);

// The distinct nonzero codim x codim minors of the un-augmented Jacobian,
// sorted by total degree. These are the saturation factors contributed by the
// singular locus.
std::vector<Polynomial> singular_minors(const ImplicitModel& model);

LikelihoodPrep prepare_likelihood(const ImplicitModel& model, const LikelihoodOptions& opts = {});

struct LikelihoodIdealResult {
    Ideal likelihood_ideal; // homogeneous, saturated
    Ideal chart;            // likelihood_ideal + <p_0 + ... + p_n - 1>
    Strategy strategy_used = Strategy::Syzygy;
    Step4Mode step4_used = Step4Mode::Full; // Full when Step4' fell back
    int dimension = 0;                      // of the chart ideal; 0 or -1 (empty)
    long colength = 0;                      // critical points counted with multiplicity
};

// Runs the whole derivation for one data vector. Throws DimensionError when
// the critical scheme has positive dimension (degenerate data).
LikelihoodIdealResult likelihood_ideal(const ImplicitModel& model, const DataVector& u,
                                       const LikelihoodOptions& opts = {},
                                       const LikelihoodPrep* prep = nullptr);

struct MLDegreeResult {
    long degree = 0;
    bool certified = false; // two independent generic draws agreed
};

// ML degree via two independent random data vectors with entries in
// [1, 10007]; certified when both are zero-dimensional with equal colength.
MLDegreeResult ml_degree(const ImplicitModel& model, std::uint64_t seed,
                         const LikelihoodOptions& opts = {});

} // namespace mlcrit
