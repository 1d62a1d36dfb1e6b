#include "cmvkit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmvkit/errors.hpp"

namespace cmv {

namespace {
constexpr double kDegeneracyRelTol = 1e-9;

bool lambda_equal(double a, double b) {
    return std::abs(a - b) <= kDegeneracyRelTol * std::max({std::abs(a), std::abs(b), 1.0});
}

// Ordered multi-index enumeration over {0..n-1}, length m.
template <typename F>
void for_each_combination(std::size_t n, std::size_t m, F&& fn) {
    if (m == 0 || m > n) return;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        std::size_t i = m;
        bool done = true;
        while (i-- > 0) {
            if (idx[i] + (m - i) < n) {
                ++idx[i];
                for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
                done = false;
                break;
            }
        }
        if (done) return;
    }
}

}  // namespace

std::size_t AsymptoticOrdering::block_of(std::size_t k) const {
    for (std::size_t b = 0; b < blocks.size(); ++b)
        if (k >= blocks[b].first && k < blocks[b].second) return b;
    throw validation_error("block_of: index out of range");
}

double AsymptoticOrdering::min_gap() const {
    double g = 1e300;
    for (std::size_t b = 0; b + 1 < blocks.size(); ++b)
        g = std::min(g, lambda[blocks[b].first] - lambda[blocks[b + 1].first]);
    return g;
}

AsymptoticOrdering order_by_lambda(const SpectralMeasure& m, const HierarchyHamiltonian& h) {
    const std::size_t n = m.n();
    AsymptoticOrdering out;
    std::vector<double> lam(n);
    for (std::size_t j = 0; j < n; ++j) lam[j] = h.F(m.theta(j));
    out.perm.resize(n);
    std::iota(out.perm.begin(), out.perm.end(), 0);
    std::sort(out.perm.begin(), out.perm.end(), [&](std::size_t a, std::size_t b) {
        if (lam[a] != lam[b]) return lam[a] > lam[b];
        return m.theta(a) < m.theta(b);  // deterministic tie-break
    });
    out.lambda.resize(n);
    out.theta.resize(n);
    out.mass.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.lambda[k] = lam[out.perm[k]];
        out.theta[k] = m.theta(out.perm[k]);
        out.mass[k] = m.mass(out.perm[k]);
    }
    std::size_t b = 0;
    while (b < n) {
        std::size_t e = b + 1;
        while (e < n && lambda_equal(out.lambda[e], out.lambda[b])) ++e;
        out.blocks.push_back({b, e});
        b = e;
    }
    return out;
}

LogMassPrediction predict_log_mass(const SpectralMeasure& m, const HierarchyHamiltonian& h,
                                   std::size_t k) {
    const AsymptoticOrdering ord = order_by_lambda(m, h);
    if (k < 1 || k > ord.lambda.size())
        throw validation_error("predict_log_mass: k out of range");
    const std::size_t nu = ord.blocks.front().second;  // top degeneracy block size
    double top_mass = 0.0;
    for (std::size_t j = 0; j < nu; ++j) top_mass += ord.mass[j];
    return {-(ord.lambda[0] - ord.lambda[k - 1]), std::log(ord.mass[k - 1] / top_mass)};
}

std::vector<double> evolved_log_masses(const SpectralMeasure& m, const HierarchyHamiltonian& h,
                                       double t) {
    const std::size_t n = m.n();
    std::vector<double> w(n);
    double wmax = -1e300;
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = h.F(m.theta(j)) * t + std::log(m.mass(j));
        wmax = std::max(wmax, w[j]);
    }
    double z = 0.0;
    for (double wi : w) z += std::exp(wi - wmax);
    const double logz = wmax + std::log(z);
    for (double& wi : w) wi -= logz;
    return w;  // indexed like the measure's atoms
}

cvector evolved_alphas(const SpectralMeasure& m, const HierarchyHamiltonian& h, double t) {
    const std::size_t n = m.n();
    if (n > 12) throw validation_error("evolved_alphas: n too large for multi-index sums");
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = h.F(m.theta(j)) * t + std::log(m.mass(j));
    cvector z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = m.z(j);

    cvector out(n);
    for (std::size_t order = 1; order <= n; ++order) {
        std::vector<double> logw;
        cvector zbar;
        for_each_combination(n, order, [&](const std::vector<std::size_t>& idx) {
            double lw = 0.0;
            cplx zb = 1.0;
            for (std::size_t a = 0; a < order; ++a) {
                lw += w[idx[a]];
                zb *= std::conj(z[idx[a]]);
                for (std::size_t b = a + 1; b < order; ++b)
                    lw += 2.0 * std::log(std::abs(z[idx[b]] - z[idx[a]]));
            }
            logw.push_back(lw);
            zbar.push_back(zb);
        });
        const double lmax = *std::max_element(logw.begin(), logw.end());
        double d0 = 0.0;
        cplx d1 = 0.0;
        for (std::size_t i = 0; i < logw.size(); ++i) {
            const double weight = std::exp(logw[i] - lmax);
            d0 += weight;
            d1 += weight * zbar[i];
        }
        const double sign = (order % 2 == 1) ? 1.0 : -1.0;
        out[order - 1] = sign * d1 / d0;
    }
    return out;
}

cplx predict_alpha_limit(const SpectralMeasure& m, const HierarchyHamiltonian& h, std::size_t k) {
    const AsymptoticOrdering ord = order_by_lambda(m, h);
    const std::size_t n = ord.lambda.size();
    if (k < 1 || k > n - 1) throw validation_error("predict_alpha_limit: k out of range");
    const std::size_t b = ord.block_of(k - 1);
    const std::size_t s = ord.blocks[b].first;            // s(k): indices before the block
    const std::size_t pick = k - s;                        // |I|
    const std::size_t bsize = ord.blocks[b].second - s;

    cplx zbar_j = 1.0;
    for (std::size_t j = 0; j < s; ++j) zbar_j *= std::conj(std::polar(1.0, ord.theta[j]));

    cvector zfull(n);
    for (std::size_t j = 0; j < n; ++j) zfull[j] = std::polar(1.0, ord.theta[j]);

    double den = 0.0;
    cplx num = 0.0;
    for_each_combination(bsize, pick, [&](const std::vector<std::size_t>& rel) {
        std::vector<std::size_t> full(s);
        std::iota(full.begin(), full.end(), 0);
        for (std::size_t r : rel) full.push_back(s + r);
        double weight = 1.0;
        cplx zbar_i = 1.0;
        for (std::size_t a = 0; a < full.size(); ++a) {
            for (std::size_t c = a + 1; c < full.size(); ++c)
                weight *= std::norm(zfull[full[c]] - zfull[full[a]]);
        }
        for (std::size_t r : rel) {
            weight *= ord.mass[s + r];
            zbar_i *= std::conj(zfull[s + r]);
        }
        den += weight;
        num += weight * zbar_i;
    });
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * zbar_j * num / den;
}

XiPrediction predict_xi(const SpectralMeasure& m, const HierarchyHamiltonian& h, std::size_t k) {
    const AsymptoticOrdering ord = order_by_lambda(m, h);
    const std::size_t n = ord.lambda.size();
    if (!ord.all_distinct())
        throw validation_error("predict_xi: lambda values must be distinct");
    if (k < 1 || k > n - 1) throw validation_error("predict_xi: k out of range");
    cvector z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = std::polar(1.0, ord.theta[j]);
    cplx xi = (z[k - 1] * std::conj(z[k]) - 1.0) * (ord.mass[k] / ord.mass[k - 1]);
    for (std::size_t l = 0; l + 1 < k; ++l)
        xi *= std::norm(z[k] - z[l]) / std::norm(z[k - 1] - z[l]);
    return {xi, -2.0 * xi.real()};
}

ScatteringReport scattering_invariants(const SpectralMeasure& m, const HierarchyHamiltonian& h) {
    const AsymptoticOrdering ord = order_by_lambda(m, h);
    const std::size_t n = ord.lambda.size();
    if (!ord.all_distinct())
        throw validation_error("scattering_invariants: lambda values must be distinct");
    cvector z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = std::polar(1.0, ord.theta[j]);

    ScatteringReport rep;
    rep.alpha_plus.resize(n - 1);
    rep.alpha_minus.resize(n - 1);
    rep.xi.resize(n - 1);
    rep.zeta.resize(n - 1);
    for (std::size_t k = 1; k <= n - 1; ++k) {
        cplx p = 1.0, q = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            p *= std::conj(z[j]);            // t -> +inf uses the top of the ordering
            q *= std::conj(z[n - 1 - j]);    // t -> -inf uses the reversed labels
        }
        const double sign = (k % 2 == 1) ? 1.0 : -1.0;
        rep.alpha_plus[k - 1] = sign * p;
        rep.alpha_minus[k - 1] = sign * q;
        rep.xi[k - 1] = predict_xi(m, h, k).xi;
        cplx zeta = (z[n - k] * std::conj(z[n - k - 1]) - 1.0) *
                    (ord.mass[n - k - 1] / ord.mass[n - k]);
        for (std::size_t l = n - k + 1; l < n; ++l)
            zeta *= std::norm(z[n - k - 1] - z[l]) / std::norm(z[n - k] - z[l]);
        rep.zeta[k - 1] = zeta;
    }

    cplx alpha_last = (n % 2 == 1) ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) alpha_last *= std::conj(z[j]);

    rep.max_product_residual = 0.0;
    for (std::size_t k = 1; k <= n - 1; ++k)
        rep.max_product_residual =
            std::max(rep.max_product_residual,
                     std::abs(rep.alpha_plus[k - 1] * rep.alpha_minus[n - k - 1] + alpha_last));

    rep.max_eigen_residual = 0.0;
    for (std::size_t j = 2; j <= n - 1; ++j)
        rep.max_eigen_residual =
            std::max(rep.max_eigen_residual,
                     std::abs(-rep.alpha_plus[j - 2] / rep.alpha_plus[j - 1] - z[j - 1]));

    rep.max_xi_zeta_residual = 0.0;
    for (std::size_t k = 1; k <= n - 1; ++k) {
        double closed = std::norm(z[k] - z[k - 1]);
        for (std::size_t l = 0; l + 1 < k; ++l)
            closed *= std::norm(z[k] - z[l]) / std::norm(z[k - 1] - z[l]);
        for (std::size_t l = k + 1; l < n; ++l)
            closed *= std::norm(z[k - 1] - z[l]) / std::norm(z[k] - z[l]);
        rep.max_xi_zeta_residual = std::max(
            rep.max_xi_zeta_residual, std::abs(rep.xi[k - 1] * rep.zeta[n - k - 1] - closed));
    }
    return rep;
}

}  // namespace cmv
