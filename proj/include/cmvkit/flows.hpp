#pragma once

#include <vector>

#include "cmvkit/cmv.hpp"
#include "cmvkit/hamiltonian.hpp"
#include "cmvkit/spectral.hpp"

namespace cmv {

struct FlowDiagnostics {
    bool mass_clamped = false;      // some mass hit the 1e-280 floor
    bool alpha_clamped = false;     // interior |alpha| clamped to 1 - 1e-14
};

/// QR-factorization integrator: G = exp(t B f'(B)) = L Q^{-1},
/// result Q^{-1} B Q, re-extracted to coefficients. Exact in t.
CMVMatrix flow_qr(const CMVMatrix& c, const HierarchyHamiltonian& h, double t);

/// Exact measure evolution mu_j(t) = e^{F(z_j) t} mu_j / sum(...), computed
/// with log-sum-exp, then reconstructed through the Szego recursion.
CMVMatrix flow_measure(const CMVMatrix& c, const HierarchyHamiltonian& h, double t,
                       FlowDiagnostics* diag = nullptr);

/// Classical RK4 on Bdot = -[B, pi_a(B f'(B))]; the final matrix is
/// re-projected to CMV through coefficient extraction. Throws when the
/// shape drift before re-projection exceeds 1e-6.
CMVMatrix flow_ode(const CMVMatrix& c, const HierarchyHamiltonian& h, double t,
                   std::size_t steps);

/// Defocusing Ablowitz-Ladik field: alphadot_j = i rho_j^2 (alpha_{j-1} +
/// alpha_{j+1}) with alpha_{-1} = -1; the final coefficient does not move.
cvector al_vector_field(const VerblunskyCoefficients& v);

/// Dressing action of a lower-triangular positive-diagonal lam:
/// c -> unitary factor of c^{-1} lam^{-1} = L Q^{-1}. Stays CMV with the
/// same determinant.
CMVMatrix dressing(const CMVMatrix& c, const Matrix& lam);

struct TrajectoryPoint {
    double t;
    cvector alphas;
    double eigenvalue_drift;   // max |z_k(t) - z_k(0)| after angle matching
    double determinant_drift;  // |det(t) - det(0)|
};

enum class Integrator { measure, qr, ode };

std::vector<TrajectoryPoint> sample_trajectory(const CMVMatrix& c, const HierarchyHamiltonian& h,
                                               const std::vector<double>& times,
                                               Integrator integrator = Integrator::measure,
                                               std::size_t ode_steps = 1000);

}  // namespace cmv
