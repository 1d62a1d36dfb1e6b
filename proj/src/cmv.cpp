#include "cmvkit/cmv.hpp"

#include <algorithm>
#include <cmath>

#include "cmvkit/errors.hpp"

namespace cmv {

namespace {
constexpr double kInteriorMargin = 1e-14;
constexpr double kCircleTol = 1e-12;
}

VerblunskyCoefficients::VerblunskyCoefficients(cvector alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw validation_error("verblunsky: empty coefficient list");
    const std::size_t n = alphas_.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (std::abs(alphas_[k]) >= 1.0 - kInteriorMargin)
            throw validation_error("verblunsky: interior coefficient too close to the circle");
    if (std::abs(std::abs(alphas_.back()) - 1.0) > kCircleTol)
        throw validation_error("verblunsky: final coefficient must lie on the unit circle");
}

double VerblunskyCoefficients::rho(std::size_t k) const {
    return std::sqrt(std::max(0.0, 1.0 - std::norm(alphas_[k])));
}

std::pair<Matrix, Matrix> build_theta_factors(const VerblunskyCoefficients& v) {
    const std::size_t n = v.n();
    auto place = [&](Matrix& m, long start_k) {
        std::size_t i = 0;
        long k = start_k;
        while (i < n) {
            if (k == -1) {
                m(i, i) = 1.0;
                i += 1;
            } else if (static_cast<std::size_t>(k) == n - 1) {
                m(i, i) = std::conj(v.alpha(n - 1));
                i += 1;
            } else {
                const cplx a = v.alpha(static_cast<std::size_t>(k));
                const double r = v.rho(static_cast<std::size_t>(k));
                m(i, i) = std::conj(a);
                m(i, i + 1) = r;
                m(i + 1, i) = r;
                m(i + 1, i + 1) = -a;
                i += 2;
            }
            k += 2;
        }
    };
    Matrix lfac(n, n), mfac(n, n);
    place(lfac, 0);
    place(mfac, -1);
    return {std::move(lfac), std::move(mfac)};
}

CMVMatrix build_cmv(const VerblunskyCoefficients& v) {
    auto [lfac, mfac] = build_theta_factors(v);
    return {lfac * mfac, v};
}

std::vector<std::pair<std::size_t, std::size_t>> exposed_entries(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    if (n >= 2) e.push_back({2, 1});
    for (std::size_t j = 1; 2 * j + 1 <= n; ++j) e.push_back({2 * j - 1, 2 * j + 1});
    for (std::size_t j = 1; 2 * j + 2 <= n; ++j) e.push_back({2 * j + 2, 2 * j});
    return e;
}

namespace {

// 1-based column band of row r: rows pair up as (2p-1, 2p); the first pair
// spans columns 1..3, pair p >= 2 spans 2p-2..2p+1 (clipped at n).
std::pair<std::size_t, std::size_t> row_band(std::size_t r, std::size_t n) {
    const std::size_t p = (r + 1) / 2;
    if (p == 1) return {1, std::min<std::size_t>(3, n)};
    return {2 * p - 2, std::min(2 * p + 1, n)};
}

}  // namespace

ShapeReport check_cmv_shape(const Matrix& m, double tol) {
    if (!m.is_square() || m.rows() < 2)
        throw validation_error("check_cmv_shape: square matrix with n >= 2 required");
    const std::size_t n = m.rows();
    ShapeReport rep;
    for (std::size_t r = 1; r <= n; ++r) {
        auto [lo, hi] = row_band(r, n);
        for (std::size_t c = 1; c <= n; ++c)
            if ((c < lo || c > hi) && std::abs(m(r - 1, c - 1)) > tol)
                rep.violations.push_back({r, c, ShapeViolation::Kind::nonzero_outside_staircase});
    }
    for (auto [r, c] : exposed_entries(n)) {
        const cplx v = m(r - 1, c - 1);
        if (!(std::abs(v.imag()) <= tol && v.real() > tol))
            rep.violations.push_back({r, c, ShapeViolation::Kind::nonpositive_exposed});
    }
    rep.is_cmv_shape = rep.violations.empty();
    return rep;
}

VerblunskyCoefficients extract_verblunsky(const Matrix& c) {
    return VerblunskyCoefficients{extract_alphas_unchecked(c)};
}

cvector extract_alphas_unchecked(const Matrix& c) {
    if (!c.is_square() || c.rows() == 0)
        throw validation_error("extract_verblunsky: square input required");
    const std::size_t n = c.rows();
    if (n == 1) return {std::conj(c(0, 0))};
    cvector al(n);
    std::vector<double> rh(n, 0.0);
    auto require_positive = [&](cplx v, std::size_t r, std::size_t col) {
        if (!(v.real() > kExposedTol))
            throw rank_error("extract_verblunsky: exposed entry (" + std::to_string(r) + "," +
                             std::to_string(col) + ") below positivity threshold");
        return v.real();
    };
    al[0] = std::conj(c(0, 0));
    rh[0] = require_positive(c(1, 0), 2, 1);
    for (std::size_t k = 1; k < n; ++k) {
        const double rprev = rh[k - 1];
        if (k % 2 == 1) {  // row k holds rho_{k-1} abar_k at (k,k+1), rho_{k-1} rho_k at (k,k+2)
            al[k] = std::conj(c(k - 1, k) / rprev);
            if (k + 1 < n) rh[k] = require_positive(c(k - 1, k + 1) / rprev, k, k + 2);
        } else {  // column k holds rho_{k-1} abar_k at (k+1,k), rho_{k-1} rho_k at (k+2,k)
            al[k] = std::conj(c(k, k - 1) / rprev);
            if (k + 1 < n) rh[k] = require_positive(c(k + 1, k - 1) / rprev, k + 2, k);
        }
    }
    return al;
}

CMVMatrix as_cmv_matrix(const Matrix& m) {
    if (!is_finite(m)) throw validation_error("cmv matrix: non-finite entries");
    if (unitarity_defect(m) > kUnitaryTol)
        throw validation_error("cmv matrix: not unitary to tolerance");
    if (m.rows() >= 2) {
        ShapeReport rep = check_cmv_shape(m);
        if (!rep.is_cmv_shape)
            throw validation_error("cmv matrix: shape check failed with " +
                                   std::to_string(rep.violations.size()) + " violations");
    }
    return {m, extract_verblunsky(m)};
}

}  // namespace cmv
