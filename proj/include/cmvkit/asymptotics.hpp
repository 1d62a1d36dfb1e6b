#pragma once

#include <vector>

#include "cmvkit/hamiltonian.hpp"
#include "cmvkit/spectral.hpp"

namespace cmv {

// Atoms relabelled so lambda_1 >= lambda_2 >= ... with lambda_k = F(z_k);
// equal values (relative 1e-9) are grouped into degeneracy blocks.
struct AsymptoticOrdering {
    std::vector<std::size_t> perm;      // perm[k] = original atom index of sorted slot k
    std::vector<double> lambda;          // sorted, descending
    std::vector<double> theta;           // relabelled angles
    std::vector<double> mass;            // relabelled masses
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end) runs of equal lambda

    std::size_t block_of(std::size_t k) const;  // 0-based sorted index
    bool all_distinct() const { return blocks.size() == lambda.size(); }
    double min_gap() const;  // smallest positive consecutive gap
};

AsymptoticOrdering order_by_lambda(const SpectralMeasure& m, const HierarchyHamiltonian& h);

struct LogMassPrediction {
    double slope;      // -(lambda_1 - lambda_k)
    double intercept;  // log[mu_k / (mu_1 + ... + mu_nu)]
};

/// k is a 1-based index into the sorted ordering.
LogMassPrediction predict_log_mass(const SpectralMeasure& m, const HierarchyHamiltonian& h,
                                   std::size_t k);

/// Exact log-masses at time t (log-sum-exp; no underflow).
std::vector<double> evolved_log_masses(const SpectralMeasure& m, const HierarchyHamiltonian& h,
                                       double t);

/// alpha_{m-1}(t) through the multi-index Heine ratio with log-space
/// weights; stable for arbitrarily large |t| (n <= 12).
cvector evolved_alphas(const SpectralMeasure& m, const HierarchyHamiltonian& h, double t);

/// t -> +infinity limit of alpha_{k-1}: the convex-combination formula over
/// multi-indices inside the k-th degeneracy block; modulus 1 iff
/// lambda_k > lambda_{k+1}.
cplx predict_alpha_limit(const SpectralMeasure& m, const HierarchyHamiltonian& h, std::size_t k);

struct XiPrediction {
    cplx xi;
    double rho_sq_prefactor;  // -2 Re xi, the rho_{k-1}^2 decay coefficient
};

/// First-order approach coefficient xi_{k-1}; requires all lambda distinct.
XiPrediction predict_xi(const SpectralMeasure& m, const HierarchyHamiltonian& h, std::size_t k);

struct ScatteringReport {
    std::vector<cplx> alpha_plus;    // alpha_{k-1}(+inf), k = 1..n-1
    std::vector<cplx> alpha_minus;   // alpha_{k-1}(-inf)
    std::vector<cplx> xi;            // k = 1..n-1
    std::vector<cplx> zeta;
    double max_product_residual;     // |alpha_+ alpha_- + alpha_{n-1}|
    double max_eigen_residual;       // |z_j + a_{j-2}(+inf)/a_{j-1}(+inf)|, j >= 2
    double max_xi_zeta_residual;     // against the squared-modulus closed form
};

/// The -infinity data come from the substitution lambda_k -> -lambda_{n-k+1},
/// z_k -> z_{n-k+1}, mu_k -> mu_{n-k+1}; requires all lambda distinct.
ScatteringReport scattering_invariants(const SpectralMeasure& m, const HierarchyHamiltonian& h);

}  // namespace cmv
