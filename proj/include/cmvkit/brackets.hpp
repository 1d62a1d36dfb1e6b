#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cmvkit/cmv.hpp"
#include "cmvkit/hamiltonian.hpp"
#include "cmvkit/matrix.hpp"

namespace cmv {

// Finite-difference steps: 1e-5 in matrix space, 1e-6 for alpha-space
// complex partials; central differences throughout.
inline constexpr double kMatrixFdStep = 1e-5;
inline constexpr double kAlphaFdStep = 1e-6;

// Scalar function of a matrix with a gradient in the pairing sense:
// d/dt phi(B + tC) = <grad phi|_B, C>. Analytic gradient when available,
// central finite differences otherwise.
struct Observable {
    std::function<double(const Matrix&)> evaluate;
    std::function<Matrix(const Matrix&)> gradient;  // may be empty: FD fallback

    Matrix grad(const Matrix& b) const;

    static Observable trace_poly(HierarchyHamiltonian h);       // Im tr f(B), grad f'(B)
    static Observable entry_re(std::size_t k, std::size_t l);   // Re B_kl, grad i E_lk
    static Observable entry_im(std::size_t k, std::size_t l);   // Im B_kl, grad E_lk
    static Observable det_phase(double theta);                  // Im[e^{i th} log det B]
    static Observable numeric(std::function<double(const Matrix&)> eval);
};

/// Central finite-difference gradient over the 2n^2 real coordinates.
Matrix fd_gradient(const std::function<double(const Matrix&)>& phi, const Matrix& b,
                   double h = kMatrixFdStep);

/// {phi, psi}|_B = 1/2 <R(XB), YB> - 1/2 <R(BX), BY>, X = grad phi, Y = grad psi.
double gd_bracket(const Observable& phi, const Observable& psi, const Matrix& b);

/// Bdot = B pi_l(XB) - pi_l(BX) B; for unitary b the equality with
/// -B pi_a(B^{-1} L B), L = pi_l(BX), is asserted to 1e-10.
Matrix hamiltonian_field(const Observable& phi, const Matrix& b);

using AlphaFunction = std::function<cplx(const cvector&)>;

/// Ablowitz-Ladik bracket 2i sum rho_j^2 [df/dabar dg/da - df/da dg/dabar]
/// over interior j, partials by complex-coordinate central differences.
cplx al_bracket(const AlphaFunction& f, const AlphaFunction& g, const VerblunskyCoefficients& v,
                double h = kAlphaFdStep);

struct IdentityResidual {
    std::string name;
    double residual;
    double tolerance;
    bool pass() const { return residual <= tolerance; }
};

struct BracketReport {
    std::vector<IdentityResidual> identities;
    double max_residual = 0.0;
    bool all_pass() const;
};

/// GD brackets of the coordinate functions Re/Im alpha_k (through the CMV
/// parametrization) against the AL values {a_k, abar_l} = -2i d_kl rho_k^2.
BracketReport verify_bracket_equality(const VerblunskyCoefficients& v);

/// Canonical relations: {th_l, log mu_j} = 2 d_lj - 2 mu_l,
/// {th_l, 1/2 log(mu_j/mu_n)} = d_jl, {th_l, th_k} = 0.
BracketReport theta_mu_brackets(const VerblunskyCoefficients& v);

/// 2cot((tq-tr)/2) + 2cot((tr-ts)/2) + 2cot((ts-tq)/2); antisymmetric,
/// zero by convention when two of q,r,s coincide as indices.
double psi_qrs(double theta_q, double theta_r, double theta_s);

struct MassBracketCheck {
    double fd_value;
    double closed_form;  // sum_k mu_k Psi_{q,r,k}
};

MassBracketCheck mass_brackets(const VerblunskyCoefficients& v, std::size_t q, std::size_t r);

/// G(x) = 2 int_0^1 t cot(xt/2) dt by adaptive quadrature; defined on
/// (-2pi, 2pi) away from 0.
double shift_kernel(double x);

/// The angle-shift functions f_l, l = 1..n-1. Angles must be exact
/// representatives with theta_1 + ... + theta_n = eta (as reals); every
/// kernel argument must stay inside (-2pi, 2pi) and away from 0.
std::vector<double> canonical_shift(std::span<const double> thetas, double eta);

struct JacobianCheck {
    double numeric_det;
    double closed_form;  // -2^{1-n} prod rho^2 / prod mu
};

/// Central-difference Jacobian of (th_1, mu_1, ..., th_{n-1}, mu_{n-1}, th_n)
/// -> (u_0, v_0, ..., u_{n-2}, v_{n-2}, phi) through the Szego inverse.
JacobianCheck jacobian_check(const VerblunskyCoefficients& v);

}  // namespace cmv
