#pragma once

#include <functional>
#include <span>

#include "cmvkit/matrix.hpp"

namespace cmv {

// Default tolerances: unitarity/shape 1e-10, factorization residuals 1e-12,
// exposed-entry positivity 1e-12. Double precision with headroom for n <= 32.
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kFactorTol = 1e-12;
inline constexpr double kExposedTol = 1e-12;

// Householder reflector at level m composed with a diagonal phase rotation,
// S = D*R. S is unitary; R alone is an involution. First m entries of v are
// exactly zero, so S fixes span(e_1..e_m).
struct Reflector {
    cvector v;          // empty when the reflector degenerates to D (or I)
    std::size_t level = 0;
    cplx phase = 1.0;   // applied at position level (0-based), unimodular

    bool is_identity() const { return v.empty() && phase == cplx{1.0, 0.0}; }
    std::size_t size() const { return n_; }

    cvector apply(std::span<const cplx> x) const;
    Matrix as_matrix() const;

    std::size_t n_ = 0;
};

/// Maps u to [u_1..u_m, s, 0..0], s = ||(u_{m+1}..u_n)|| >= 0. Degenerate
/// tails (already canonical) give the identity reflector.
Reflector householder_reflector(std::span<const cplx> u, std::size_t m);

struct QrFactors {
    Matrix q;  // unitary
    Matrix r;  // upper triangular, real positive diagonal
};

/// Unique A = Q R with diag(R) > 0; throws singular_matrix_error when a
/// column collapses during elimination.
QrFactors qr_positive(const Matrix& a);

struct LqFactors {
    Matrix l;  // lower triangular, real positive diagonal
    Matrix q;  // unitary; a = l * q^{-1}
};

/// A = L Q^{-1} via qr_positive of the adjoint.
LqFactors lq_unitary_factor(const Matrix& a);

struct EigenDecomposition {
    cvector values;   // sorted by principal argument in [0, 2pi)
    Matrix vectors;   // columns; unitary for normal input
};

struct HessenbergForm {
    Matrix h;
    Matrix q;  // q^dag a q = h
};

HessenbergForm hessenberg(const Matrix& a);

/// Shifted QR with Wilkinson shifts on the Hessenberg form. Input must be
/// unitary to kUnitaryTol. Deterministic ordering: ascending argument,
/// ties by first-component magnitude of the eigenvector.
EigenDecomposition eig_unitary(const Matrix& u);

/// g applied through the eigendecomposition: V diag(g(z_k)) V^dag.
/// Valid for normal (here: unitary) input.
Matrix matrix_function(const Matrix& u, const std::function<cplx(cplx)>& g);

struct Splitting {
    Matrix lower;  // lower triangular, real diagonal
    Matrix anti;   // anti-Hermitian
};

/// X = lower + anti. anti keeps the strict upper triangle of X, diagonal
/// i*Im(diag X), strict lower = -(strict upper)^dag.
Splitting project_la(const Matrix& x);

Matrix pi_lower(const Matrix& x);
Matrix pi_anti(const Matrix& x);

/// R(L + A) = L - A.
Matrix r_map(const Matrix& x);

/// Im tr(XY). Symmetric, ad-invariant, non-degenerate.
double pairing(const Matrix& x, const Matrix& y);

}  // namespace cmv
