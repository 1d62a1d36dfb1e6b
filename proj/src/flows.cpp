#include "cmvkit/flows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmvkit/asymptotics.hpp"
#include "cmvkit/errors.hpp"

namespace cmv {

namespace {
constexpr double kMassFloor = 1e-280;
constexpr double kInteriorClamp = 1.0 - 1e-14;

cvector clamp_interior(cvector a, bool* clamped) {
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
        const double m = std::abs(a[k]);
        if (m >= kInteriorClamp) {
            a[k] *= (1.0 - 2e-14) / m;  // strictly inside the validation margin
            if (clamped) *clamped = true;
        }
    }
    return a;
}
}  // namespace

CMVMatrix flow_qr(const CMVMatrix& c, const HierarchyHamiltonian& h, double t) {
    if (c.n() == 1 || t == 0.0) return c;
    const Matrix g = matrix_function(
        c.m, [&](cplx z) { return std::exp(t * z * h.f_prime(z)); });
    if (!is_finite(g))
        throw numerical_error(
            "flow_qr: exp(t B f'(B)) overflowed; split the time interval");
    LqFactors lq;
    try {
        lq = lq_unitary_factor(g);
    } catch (const singular_matrix_error&) {
        throw numerical_error(
            "flow_qr: factor exp(t B f'(B)) too ill-conditioned; split the time interval");
    }
    const Matrix next = lq.q.adjoint() * c.m * lq.q;
    return as_cmv_matrix(next);
}

CMVMatrix flow_measure(const CMVMatrix& c, const HierarchyHamiltonian& h, double t,
                       FlowDiagnostics* diag) {
    if (c.n() == 1) return c;
    const SpectralMeasure m0 = measure_of(c);
    const std::size_t n = m0.n();
    if (t == 0.0) return c;
    std::vector<double> w(n);
    double wmax = -1e300;
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = h.F(m0.theta(j)) * t + std::log(m0.mass(j));
        wmax = std::max(wmax, w[j]);
    }
    bool clamped = false;
    std::vector<Atom> atoms(n);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double mu = std::exp(w[j] - wmax);
        if (mu < kMassFloor) {
            mu = kMassFloor;
            clamped = true;
        }
        atoms[j] = {m0.theta(j), mu};
        sum += mu;
    }
    for (Atom& a : atoms) a.mass /= sum;
    if (diag) diag->mass_clamped = clamped;
    const SpectralMeasure mt{std::move(atoms)};
    cvector a;
    try {
        a = szego_alphas_unchecked(mt);
    } catch (const rank_error&) {
        // Szego hits its double-precision floor once the mass spread is
        // extreme; the multi-index Heine ratio in log space stays exact.
        a = evolved_alphas(m0, h, t);
        a.back() /= std::abs(a.back());
    }
    bool aclamped = false;
    a = clamp_interior(std::move(a), &aclamped);
    if (diag) diag->alpha_clamped = aclamped;
    return build_cmv(VerblunskyCoefficients{std::move(a)});
}

CMVMatrix flow_ode(const CMVMatrix& c, const HierarchyHamiltonian& h, double t,
                   std::size_t steps) {
    if (steps < 1) throw validation_error("flow_ode: steps >= 1 required");
    if (c.n() == 1 || t == 0.0) return c;
    auto rhs = [&](const Matrix& b) {
        return -1.0 * commutator(b, pi_anti(b * h.f_prime_matrix(b)));
    };
    Matrix b = c.m;
    const double dt = t / static_cast<double>(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        const Matrix k1 = rhs(b);
        const Matrix k2 = rhs(b + (dt / 2.0) * k1);
        const Matrix k3 = rhs(b + (dt / 2.0) * k2);
        const Matrix k4 = rhs(b + dt * k3);
        b += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // Shape drift guard, then re-projection through the coefficients.
    double drift = 0.0;
    for (const ShapeViolation& v : check_cmv_shape(b, 0.0).violations)
        if (v.kind == ShapeViolation::Kind::nonzero_outside_staircase)
            drift = std::max(drift, std::abs(b(v.row - 1, v.col - 1)));
    if (drift > 1e-6)
        throw numerical_error("flow_ode: shape drift " + std::to_string(drift) +
                              " before re-projection; increase steps");
    cvector a = extract_alphas_unchecked(b);
    a = clamp_interior(std::move(a), nullptr);
    a.back() /= std::abs(a.back());
    return build_cmv(VerblunskyCoefficients{std::move(a)});
}

cvector al_vector_field(const VerblunskyCoefficients& v) {
    const std::size_t n = v.n();
    cvector out(n, cplx{0.0, 0.0});
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const cplx left = (j == 0) ? cplx{-1.0, 0.0} : v.alpha(j - 1);
        const double r2 = 1.0 - std::norm(v.alpha(j));
        out[j] = cplx{0.0, 1.0} * r2 * (left + v.alpha(j + 1));
    }
    return out;  // final coefficient is a Casimir direction: derivative 0
}

CMVMatrix dressing(const CMVMatrix& c, const Matrix& lam) {
    const std::size_t n = c.n();
    if (!lam.is_square() || lam.rows() != n)
        throw validation_error("dressing: dimension mismatch");
    const double scale = std::max(lam.max_abs(), 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lam(i, i).real() > 0.0) || std::abs(lam(i, i).imag()) > 1e-13 * scale)
            throw validation_error("dressing: lam must have a positive diagonal");
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(lam(i, j)) > 1e-13 * scale)
                throw validation_error("dressing: lam must be lower triangular");
    }
    Matrix m;
    try {
        m = inverse(lam * c.m);  // c^{-1} lam^{-1}
    } catch (const singular_matrix_error&) {
        throw numerical_error("dressing: lam * c not invertible");
    }
    LqFactors lq;
    try {
        lq = lq_unitary_factor(m);
    } catch (const singular_matrix_error&) {
        throw numerical_error("dressing: factorization failed; lam too ill-conditioned");
    }
    return as_cmv_matrix(lq.q);
}

std::vector<TrajectoryPoint> sample_trajectory(const CMVMatrix& c, const HierarchyHamiltonian& h,
                                               const std::vector<double>& times,
                                               Integrator integrator, std::size_t ode_steps) {
    EigenDecomposition e0 = eig_unitary(c.m);
    const cplx det0 = determinant(c.m);
    std::vector<TrajectoryPoint> out;
    out.reserve(times.size());
    for (double t : times) {
        CMVMatrix ct = [&] {
            switch (integrator) {
                case Integrator::qr: return flow_qr(c, h, t);
                case Integrator::ode: return flow_ode(c, h, t, ode_steps);
                default: return flow_measure(c, h, t);
            }
        }();
        EigenDecomposition et = eig_unitary(ct.m);
        double edrift = 0.0;
        for (std::size_t j = 0; j < e0.values.size(); ++j) {
            double best = 1e300;
            for (std::size_t k = 0; k < et.values.size(); ++k)
                best = std::min(best, std::abs(et.values[k] - e0.values[j]));
            edrift = std::max(edrift, best);
        }
        const cvector alphas = ct.coefficients ? ct.coefficients->alphas()
                                               : extract_verblunsky(ct.m).alphas();
        out.push_back({t, alphas, edrift, std::abs(determinant(ct.m) - det0)});
    }
    return out;
}

}  // namespace cmv
