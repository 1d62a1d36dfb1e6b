#include "cmvkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmvkit/errors.hpp"

namespace cmv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMassSumTol = 1e-12;
constexpr double kGapTol = 1e-10;

double circle_gap(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}
}  // namespace

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw validation_error("spectral measure: no atoms");
    double sum = 0.0;
    for (Atom& a : atoms_) {
        if (!(a.mass > 0.0)) throw validation_error("spectral measure: nonpositive mass");
        a.theta = std::fmod(a.theta, kTwoPi);
        if (a.theta < 0.0) a.theta += kTwoPi;
        sum += a.mass;
    }
    if (std::abs(sum - 1.0) > kMassSumTol)
        throw validation_error("spectral measure: masses sum to " + std::to_string(sum));
    for (Atom& a : atoms_) a.mass /= sum;
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& x, const Atom& y) { return x.theta < y.theta; });
    for (std::size_t j = 0; j + 1 < atoms_.size(); ++j)
        if (circle_gap(atoms_[j].theta, atoms_[j + 1].theta) <= kGapTol)
            throw validation_error("spectral measure: coincident atoms");
    if (atoms_.size() > 1 && circle_gap(atoms_.front().theta, atoms_.back().theta) <= kGapTol)
        throw validation_error("spectral measure: coincident atoms");
}

cplx SpectralMeasure::z(std::size_t j) const {
    return std::polar(1.0, atoms_[j].theta);
}

cplx SpectralMeasure::moment(long p) const {
    cplx s = 0.0;
    for (const Atom& a : atoms_) s += a.mass * std::polar(1.0, static_cast<double>(p) * a.theta);
    return s;
}

SpectralMeasure measure_of(const CMVMatrix& c) {
    EigenDecomposition e = eig_unitary(c.m);
    const std::size_t n = c.n();
    for (std::size_t j = 0; j + 1 < n; ++j)
        if (std::abs(e.values[j] - e.values[j + 1]) <= kGapTol)
            throw degenerate_spectrum_error("measure_of: repeated eigenvalue, e_1 cannot be cyclic");
    if (n > 1 && std::abs(e.values.front() - e.values.back()) <= kGapTol)
        throw degenerate_spectrum_error("measure_of: repeated eigenvalue, e_1 cannot be cyclic");
    std::vector<Atom> atoms(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double th = std::arg(e.values[j]);
        if (th < 0.0) th += kTwoPi;
        atoms[j] = {th, std::norm(e.vectors(0, j))};
        sum += atoms[j].mass;
    }
    for (Atom& a : atoms) a.mass /= sum;
    return SpectralMeasure{std::move(atoms)};
}

VerblunskyCoefficients verblunsky_of_measure(const SpectralMeasure& m, double* modulus_drift) {
    cvector alphas = szego_alphas_unchecked(m, modulus_drift);
    for (std::size_t k = 0; k + 1 < alphas.size(); ++k)
        if (std::abs(alphas[k]) >= 1.0 - 1e-14)
            throw rank_error("verblunsky_of_measure: interior coefficient pinned to the circle "
                             "(fewer than n effective atoms) at index " + std::to_string(k));
    return VerblunskyCoefficients{std::move(alphas)};
}

cvector szego_alphas_unchecked(const SpectralMeasure& m, double* modulus_drift) {
    const std::size_t n = m.n();
    cvector z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = m.z(j);

    // Monic recursion Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k^*, with
    // conj(alpha_k) = <1, z Phi_k> / ||Phi_k||^2 and Phi_{k+1}(0) = -conj(alpha_k).
    cvector coeffs{1.0};  // ascending degree
    cvector alphas(n);
    for (std::size_t k = 0; k < n; ++k) {
        cvector vals(n, cplx{0.0, 0.0});
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (std::size_t d = coeffs.size(); d-- > 0;) acc = acc * z[j] + coeffs[d];
            vals[j] = acc;
        }
        double den = 0.0;
        cplx num = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            den += m.mass(j) * std::norm(vals[j]);
            num += m.mass(j) * z[j] * vals[j];
        }
        if (!(den > 1e-300))
            throw rank_error("verblunsky_of_measure: norm collapse at step " + std::to_string(k));
        const cplx abar = num / den;
        alphas[k] = std::conj(abar);
        cvector next(k + 2, cplx{0.0, 0.0});
        for (std::size_t d = 0; d <= k; ++d) {
            next[d + 1] += coeffs[d];                       // z Phi_k
            next[d] -= abar * std::conj(coeffs[k - d]);     // -abar Phi_k^*
        }
        coeffs = std::move(next);
    }
    const double mod = std::abs(alphas[n - 1]);
    if (modulus_drift) *modulus_drift = std::abs(mod - 1.0);
    if (std::abs(mod - 1.0) > 1e-8)
        throw rank_error("szego: final coefficient off the circle by " +
                         std::to_string(std::abs(mod - 1.0)));
    alphas[n - 1] /= mod;
    return alphas;
}

std::pair<cplx, cplx> toeplitz_dets(const SpectralMeasure& m, std::size_t order) {
    if (order < 1 || order > m.n()) throw validation_error("toeplitz_dets: order out of range");
    Matrix t0(order, order), t1(order, order);
    for (std::size_t k = 1; k <= order; ++k)
        for (std::size_t l = 1; l <= order; ++l) {
            t0(k - 1, l - 1) = m.moment(static_cast<long>(k) - static_cast<long>(l));
            t1(k - 1, l - 1) = m.moment(static_cast<long>(k) - static_cast<long>(l) - 1);
        }
    return {determinant(t0), determinant(t1)};
}

cplx heine_alpha(const SpectralMeasure& m, std::size_t order) {
    auto [d0, d1] = toeplitz_dets(m, order);
    if (std::abs(d0) < 1e-300)
        throw numerical_error("heine_alpha: Toeplitz determinant underflow");
    const double sign = (order % 2 == 1) ? 1.0 : -1.0;
    return sign * d1 / d0;
}

std::pair<cplx, cplx> cauchy_binet_oracle(const SpectralMeasure& m, std::size_t order) {
    const std::size_t n = m.n();
    if (n > 12) throw validation_error("cauchy_binet_oracle: n too large");
    if (order < 1 || order > n) throw validation_error("cauchy_binet_oracle: order out of range");
    std::vector<std::size_t> idx(order);
    for (std::size_t i = 0; i < order; ++i) idx[i] = i;
    cplx d0 = 0.0, d1 = 0.0;
    while (true) {
        double w = 1.0;
        cplx zbar = 1.0;
        for (std::size_t a = 0; a < order; ++a) {
            w *= m.mass(idx[a]);
            zbar *= std::conj(m.z(idx[a]));
            for (std::size_t b = a + 1; b < order; ++b)
                w *= std::norm(m.z(idx[b]) - m.z(idx[a]));
        }
        d0 += w;
        d1 += w * zbar;
        // next ordered multi-index
        std::size_t i = order;
        while (i-- > 0) {
            if (idx[i] + (order - i) < n) {
                ++idx[i];
                for (std::size_t j = i + 1; j < order; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return {d0, d1};
        }
    }
}

}  // namespace cmv
