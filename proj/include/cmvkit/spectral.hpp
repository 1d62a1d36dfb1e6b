#pragma once

#include <utility>
#include <vector>

#include "cmvkit/cmv.hpp"
#include "cmvkit/matrix.hpp"

namespace cmv {

struct Atom {
    double theta;  // in [0, 2pi)
    double mass;   // > 0
};

// n atoms on the unit circle, masses summing to 1, angles pairwise distinct
// (circle gap > 1e-10). Atoms are kept sorted by angle.
class SpectralMeasure {
public:
    explicit SpectralMeasure(std::vector<Atom> atoms);

    std::size_t n() const { return atoms_.size(); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double theta(std::size_t j) const { return atoms_[j].theta; }
    double mass(std::size_t j) const { return atoms_[j].mass; }
    cplx z(std::size_t j) const;

    /// Moment: sum_j mu_j z_j^p. moment(0) = 1, moment(-p) = conj(moment(p)).
    cplx moment(long p) const;

private:
    std::vector<Atom> atoms_;
};

/// Spectral measure of (C, e_1): atoms (arg z_j, |<e_1, v_j>|^2), masses
/// renormalized to sum exactly one. Throws degenerate_spectrum_error when
/// two eigenvalues collide within the gap tolerance.
SpectralMeasure measure_of(const CMVMatrix& c);

/// Szego recursion against the discrete measure. The final coefficient is
/// renormalized to the circle; its pre-normalization modulus drift is
/// written to *modulus_drift when given. Throws rank_error when the measure
/// has fewer than n effective atoms (norm collapse or an interior
/// coefficient pinned to the circle).
VerblunskyCoefficients verblunsky_of_measure(const SpectralMeasure& m,
                                             double* modulus_drift = nullptr);

/// Raw recursion output without the coefficient-class validation; interior
/// entries may sit on the circle boundary. Callers that clamp (long-time
/// flows) use this.
cvector szego_alphas_unchecked(const SpectralMeasure& m, double* modulus_drift = nullptr);

/// d0 = det[moment(k-l)], d1 = det[moment(k-l-1)], 1 <= k,l <= m.
std::pair<cplx, cplx> toeplitz_dets(const SpectralMeasure& m, std::size_t order);

/// alpha_{m-1} = (-1)^{m-1} d1/d0.
cplx heine_alpha(const SpectralMeasure& m, std::size_t order);

/// Multi-index oracle: d0 = sum_I |Delta_I|^2 mu_I, d1 adds zbar_I;
/// I runs over ordered multi-indices of the given length. n <= 12.
std::pair<cplx, cplx> cauchy_binet_oracle(const SpectralMeasure& m, std::size_t order);

}  // namespace cmv
