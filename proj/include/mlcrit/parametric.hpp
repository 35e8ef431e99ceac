#pragma once

#include "mlcrit/ideal.hpp"
#include "mlcrit/likelihood.hpp"
#include "mlcrit/module_gb.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mlcrit {

// A model given by a polynomial parametrization theta -> (f_0..f_n) of the
// simplex: the coordinates must sum to 1 identically. The implicit picture
// (vanishing ideal and generic fiber degree delta) is optional metadata used
// by the consistency check; delta is supplied, never computed.
struct ParametricModel {
    RingPtr ring; // the parameter ring R[theta_1..theta_d]
    std::vector<Polynomial> coords;
    std::optional<ImplicitModel> implicit_link;
    long fiber_degree = 1;
};

// Validates: at least two coordinates, none zero, sum identically 1.
ParametricModel make_parametric_model(const RingPtr& ring, std::vector<Polynomial> coords);

// The (n+1) x (n+1+d) matrix [diag(f_0..f_n) | Df] whose kernel is the module
// of logarithmic vector fields along the divisor f_0 f_1 ... f_n = 0.
PolyMatrix build_param_matrix(const ParametricModel& model);

// The Jacobian block Df = (df_i / dtheta_j), (n+1) x d.
PolyMatrix param_jacobian(const ParametricModel& model);

// J_u: from each kernel generator (psi, xi) of the model matrix, take
// sum_i u_i psi_i, then saturate by every coordinate f_i in turn.
Ideal parametric_likelihood_ideal(const ParametricModel& model, const DataVector& u,
                                  const GBOptions& gb = {});

// K_u = (J_u : Q^inf) where Q is generated by the d x d minors of Df; the
// saturation runs factor by factor and removes the components supported on
// the singular locus of the parametrization. `passes_changed`, when given,
// receives the number of factor saturations that actually changed the ideal.
Ideal remove_singular_locus(const Ideal& j_u, const ParametricModel& model, const GBOptions& gb = {},
                            int* passes_changed = nullptr);

struct ParametricResult {
    Ideal j_u;
    Ideal k_u;
    int dimension = 0;    // of K_u; -1 when K_u is the unit ideal
    long colength = -1;   // of K_u, or -1 when K_u is not zero-dimensional
    int extraneous_passes = 0; // singular-locus saturations that changed the ideal
};

// Runs the two stages above and measures K_u.
ParametricResult parametric_likelihood(const ParametricModel& model, const DataVector& u,
                                       const GBOptions& gb = {});

struct ConsistencyReport {
    long colength = 0;     // of K_u at the drawn data
    long ml_degree = 0;    // of the linked implicit model
    long fiber_degree = 0; // delta
    bool ml_certified = false;
};

// Draws generic data, computes both sides of colength(K_u) = delta * ML
// degree, and throws ToleranceError on mismatch (wrong delta or degenerate
// draw). Requires the implicit link.
ConsistencyReport parametric_ml_consistency(const ParametricModel& model, std::uint64_t seed = 1,
                                            const GBOptions& gb = {});

} // namespace mlcrit
