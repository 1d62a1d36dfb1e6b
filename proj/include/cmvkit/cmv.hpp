#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cmvkit/linalg.hpp"
#include "cmvkit/matrix.hpp"

namespace cmv {

// Ordered coefficients alpha_0..alpha_{n-1}: interior ones strictly inside
// the unit disc (|a| < 1 - 1e-14 so the rho divisions stay safe), the last
// on the unit circle within 1e-12.
class VerblunskyCoefficients {
public:
    explicit VerblunskyCoefficients(cvector alphas);

    std::size_t n() const { return alphas_.size(); }
    const cvector& alphas() const { return alphas_; }
    cplx alpha(std::size_t k) const { return alphas_[k]; }
    double rho(std::size_t k) const;  // sqrt(1 - |alpha_k|^2), interior k

private:
    cvector alphas_;
};

struct ShapeViolation {
    std::size_t row, col;  // 1-based
    enum class Kind { nonzero_outside_staircase, nonpositive_exposed } kind;
};

struct ShapeReport {
    bool is_cmv_shape = false;
    std::vector<ShapeViolation> violations;
};

// Unitary matrix in CMV shape together with its (cached) coefficients.
struct CMVMatrix {
    Matrix m;
    std::optional<VerblunskyCoefficients> coefficients;

    std::size_t n() const { return m.rows(); }
};

/// Block-diagonal factors: Lfac = diag(Xi_0, Xi_2, ...),
/// Mfac = diag(Xi_{-1}, Xi_1, ...), Xi_k = [[conj(a_k), rho_k], [rho_k, -a_k]].
std::pair<Matrix, Matrix> build_theta_factors(const VerblunskyCoefficients& v);

/// C = Lfac * Mfac; unitary, CMV shape, det = (-1)^{n-1} conj(alpha_{n-1}).
CMVMatrix build_cmv(const VerblunskyCoefficients& v);

/// Exposed positions: (2,1), (2j-1,2j+1), (2j+2,2j); 1-based.
std::vector<std::pair<std::size_t, std::size_t>> exposed_entries(std::size_t n);

/// Staircase zero pattern plus real-positive exposed entries.
ShapeReport check_cmv_shape(const Matrix& m, double tol = kExposedTol);

/// Reads the coefficients back from a unitary CMV-shape matrix; divisions
/// only by accumulated rho products (the exposed entries). Throws
/// rank_error when an exposed entry is below the positivity threshold
/// (the matrix is numerically a direct sum).
VerblunskyCoefficients extract_verblunsky(const Matrix& c);

/// Extraction recursion without the coefficient-class validation; used by
/// integrators that clamp drifting coefficients afterwards.
cvector extract_alphas_unchecked(const Matrix& c);

/// Validated wrapper: shape + unitarity checked, coefficients cached.
CMVMatrix as_cmv_matrix(const Matrix& m);

}  // namespace cmv
