#include "cmvkit/brackets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmvkit/errors.hpp"
#include "cmvkit/quadrature.hpp"
#include "cmvkit/spectral.hpp"

namespace cmv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Matrix Observable::grad(const Matrix& b) const {
    if (gradient) return gradient(b);
    return fd_gradient(evaluate, b);
}

Observable Observable::trace_poly(HierarchyHamiltonian h) {
    Observable o;
    o.evaluate = [h](const Matrix& b) { return h.phi(b); };
    o.gradient = [h](const Matrix& b) { return h.f_prime_matrix(b); };
    return o;
}

Observable Observable::entry_re(std::size_t k, std::size_t l) {
    Observable o;
    o.evaluate = [k, l](const Matrix& b) { return b(k, l).real(); };
    o.gradient = [k, l](const Matrix& b) {
        Matrix g(b.rows(), b.cols());
        g(l, k) = cplx{0.0, 1.0};
        return g;
    };
    return o;
}

Observable Observable::entry_im(std::size_t k, std::size_t l) {
    Observable o;
    o.evaluate = [k, l](const Matrix& b) { return b(k, l).imag(); };
    o.gradient = [k, l](const Matrix& b) {
        Matrix g(b.rows(), b.cols());
        g(l, k) = cplx{1.0, 0.0};
        return g;
    };
    return o;
}

Observable Observable::det_phase(double theta) {
    Observable o;
    const cplx ph = std::polar(1.0, theta);
    o.evaluate = [ph](const Matrix& b) { return (ph * std::log(determinant(b))).imag(); };
    o.gradient = [ph](const Matrix& b) { return ph * inverse(b); };
    return o;
}

Observable Observable::numeric(std::function<double(const Matrix&)> eval) {
    Observable o;
    o.evaluate = std::move(eval);
    return o;
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& phi, const Matrix& b, double h) {
    const std::size_t n = b.rows();
    Matrix g(n, b.cols());
    Matrix work = b;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < b.cols(); ++k) {
            const cplx orig = work(l, k);
            work(l, k) = orig + h;
            const double fup = phi(work);
            work(l, k) = orig - h;
            const double fum = phi(work);
            work(l, k) = orig + cplx{0.0, h};
            const double fvp = phi(work);
            work(l, k) = orig - cplx{0.0, h};
            const double fvm = phi(work);
            work(l, k) = orig;
            // [grad]_{k,l} = dphi/dv_{l,k} + i dphi/du_{l,k}
            g(k, l) = cplx{(fvp - fvm) / (2.0 * h), (fup - fum) / (2.0 * h)};
        }
    return g;
}

double gd_bracket(const Observable& phi, const Observable& psi, const Matrix& b) {
    const Matrix x = phi.grad(b);
    const Matrix y = psi.grad(b);
    return 0.5 * pairing(r_map(x * b), y * b) - 0.5 * pairing(r_map(b * x), b * y);
}

Matrix hamiltonian_field(const Observable& phi, const Matrix& b) {
    const Matrix x = phi.grad(b);
    const Matrix field = b * pi_lower(x * b) - pi_lower(b * x) * b;
    if (unitarity_defect(b) <= kUnitaryTol) {
        const Matrix l = pi_lower(b * x);
        const Matrix alt = -1.0 * (b * pi_anti(b.adjoint() * l * b));
        if ((field - alt).max_abs() > 1e-10 * std::max(1.0, field.max_abs()))
            throw numerical_error("hamiltonian_field: unitary-form identity violated");
    }
    return field;
}

cplx al_bracket(const AlphaFunction& f, const AlphaFunction& g, const VerblunskyCoefficients& v,
                double h) {
    const std::size_t n = v.n();
    cvector base = v.alphas();
    auto wirtinger = [&](const AlphaFunction& fn, std::size_t j, cplx& da, cplx& dabar) {
        cvector a = base;
        a[j] = base[j] + h;
        const cplx f1 = fn(a);
        a[j] = base[j] - h;
        const cplx f2 = fn(a);
        a[j] = base[j] + cplx{0.0, h};
        const cplx f3 = fn(a);
        a[j] = base[j] - cplx{0.0, h};
        const cplx f4 = fn(a);
        const cplx du = (f1 - f2) / (2.0 * h);
        const cplx dv = (f3 - f4) / (2.0 * h);
        da = 0.5 * (du - cplx{0.0, 1.0} * dv);
        dabar = 0.5 * (du + cplx{0.0, 1.0} * dv);
    };
    cplx total = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        cplx fa, fab, ga, gab;
        wirtinger(f, j, fa, fab);
        wirtinger(g, j, ga, gab);
        total += (1.0 - std::norm(base[j])) * (fab * ga - fa * gab);
    }
    return cplx{0.0, 2.0} * total;
}

bool BracketReport::all_pass() const {
    return std::all_of(identities.begin(), identities.end(),
                       [](const IdentityResidual& r) { return r.pass(); });
}

namespace {

void push(BracketReport& rep, std::string name, double residual, double tol) {
    rep.identities.push_back({std::move(name), residual, tol});
    rep.max_residual = std::max(rep.max_residual, residual);
}

// Extraction recursion run verbatim on arbitrary matrices near the CMV
// point; smooth, so usable as a coordinate chart for FD gradients.
cplx alpha_chart(const Matrix& c, std::size_t want) {
    const std::size_t n = c.rows();
    if (want == 0) return std::conj(c(0, 0));
    cplx rprev = c(1, 0);
    for (std::size_t k = 1; k < n; ++k) {
        cplx ak, rk;
        if (k % 2 == 1) {
            ak = std::conj(c(k - 1, k) / rprev);
            if (k + 1 < n) rk = c(k - 1, k + 1) / rprev;
        } else {
            ak = std::conj(c(k, k - 1) / rprev);
            if (k + 1 < n) rk = c(k + 1, k - 1) / rprev;
        }
        if (k == want) return ak;
        rprev = rk;
    }
    throw validation_error("alpha_chart: index out of range");
}

}  // namespace

BracketReport verify_bracket_equality(const VerblunskyCoefficients& v) {
    const CMVMatrix c = build_cmv(v);
    const std::size_t n = v.n();
    BracketReport rep;
    std::vector<Observable> re(n - 1), im(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        re[k] = Observable::numeric(
            [k](const Matrix& b) { return alpha_chart(b, k).real(); });
        im[k] = Observable::numeric(
            [k](const Matrix& b) { return alpha_chart(b, k).imag(); });
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t l = 0; l + 1 < n; ++l) {
            const double uu = gd_bracket(re[k], re[l], c.m);
            const double uv = gd_bracket(re[k], im[l], c.m);
            const double vu = gd_bracket(im[k], re[l], c.m);
            const double vv = gd_bracket(im[k], im[l], c.m);
            const cplx b_aa = uu + cplx{0.0, 1.0} * vu + cplx{0.0, 1.0} * uv - vv;
            const cplx b_ab = uu + cplx{0.0, 1.0} * vu - cplx{0.0, 1.0} * uv + vv;
            const cplx target = (k == l) ? cplx{0.0, -2.0} * (1.0 - std::norm(v.alpha(k))) : 0.0;
            push(rep, "{a" + std::to_string(k) + ",a" + std::to_string(l) + "}",
                 std::abs(b_aa), 1e-6);
            push(rep, "{a" + std::to_string(k) + ",abar" + std::to_string(l) + "}",
                 std::abs(b_ab - target), 1e-6);
        }

    // Diagonal-entry brackets, 1-based j: {C_jj, Cbar_jj} = 2i(rho_{j-1}^2 -
    // rho_{j-2}^2), {C_jj, Cbar_{j-1,j-1}} = 0, with alpha_{-1} = -1, rho_{-1} = 0.
    auto alpha_conv = [&](long k) { return k == -1 ? cplx{-1.0, 0.0} : v.alpha(static_cast<std::size_t>(k)); };
    auto rho2_conv = [&](long k) {
        if (k < 0) return 0.0;
        return 1.0 - std::norm(v.alpha(static_cast<std::size_t>(k)));
    };
    for (std::size_t j1 = 1; j1 <= n; ++j1) {
        const std::size_t j = j1 - 1;
        const Observable fr = Observable::entry_re(j, j), fi = Observable::entry_im(j, j);
        const double uu = gd_bracket(fr, fr, c.m), uv = gd_bracket(fr, fi, c.m);
        const double vu = gd_bracket(fi, fr, c.m), vv = gd_bracket(fi, fi, c.m);
        const cplx bjb = uu + cplx{0.0, 1.0} * vu - cplx{0.0, 1.0} * uv + vv;
        const cplx be1 = cplx{0.0, 2.0} * (rho2_conv(static_cast<long>(j1) - 1) -
                                           rho2_conv(static_cast<long>(j1) - 2));
        push(rep, "{C" + std::to_string(j1) + "," + "Cbar" + std::to_string(j1) + "}",
             std::abs(bjb - be1), 1e-9);
        if (j1 >= 2) {
            const Observable gr = Observable::entry_re(j - 1, j - 1),
                             gi = Observable::entry_im(j - 1, j - 1);
            const double puu = gd_bracket(fr, gr, c.m), puv = gd_bracket(fr, gi, c.m);
            const double pvu = gd_bracket(fi, gr, c.m), pvv = gd_bracket(fi, gi, c.m);
            const cplx bg = puu + cplx{0.0, 1.0} * pvu + cplx{0.0, 1.0} * puv - pvv;
            const cplx bgb = puu + cplx{0.0, 1.0} * pvu - cplx{0.0, 1.0} * puv + pvv;
            const cplx be2 = cplx{0.0, -2.0} * rho2_conv(static_cast<long>(j1) - 2) *
                             alpha_conv(static_cast<long>(j1) - 3) *
                             std::conj(alpha_conv(static_cast<long>(j1) - 1));
            push(rep, "{C" + std::to_string(j1) + ",C" + std::to_string(j1 - 1) + "}",
                 std::abs(bg - be2), 1e-9);
            push(rep, "{C" + std::to_string(j1) + ",Cbar" + std::to_string(j1 - 1) + "}",
                 std::abs(bgb), 1e-9);
        }
    }
    return rep;
}

namespace {

// theta_l and log mu_j as functions of the coefficient vector, matched to
// the base point's atoms by nearest angle so FD probes stay on one branch.
struct ThetaMuChart {
    std::vector<double> base_theta;
    std::vector<double> base_mass;

    explicit ThetaMuChart(const VerblunskyCoefficients& v) {
        const SpectralMeasure m = measure_of(build_cmv(v));
        base_theta.resize(m.n());
        base_mass.resize(m.n());
        for (std::size_t j = 0; j < m.n(); ++j) {
            base_theta[j] = m.theta(j);
            base_mass[j] = m.mass(j);
        }
    }

    std::pair<std::vector<double>, std::vector<double>> operator()(const cvector& a) const {
        const SpectralMeasure m = measure_of(build_cmv(VerblunskyCoefficients{a}));
        std::vector<double> th(base_theta.size()), mu(base_theta.size());
        for (std::size_t i = 0; i < base_theta.size(); ++i) {
            double best = 1e300;
            std::size_t arg = 0;
            for (std::size_t j = 0; j < m.n(); ++j) {
                double d = std::remainder(m.theta(j) - base_theta[i], kTwoPi);
                if (std::abs(d) < best) {
                    best = std::abs(d);
                    arg = j;
                }
            }
            th[i] = base_theta[i] + std::remainder(m.theta(arg) - base_theta[i], kTwoPi);
            mu[i] = m.mass(arg);
        }
        return {std::move(th), std::move(mu)};
    }
};

}  // namespace

BracketReport theta_mu_brackets(const VerblunskyCoefficients& v) {
    const std::size_t n = v.n();
    ThetaMuChart chart(v);
    // Fail early on conditioning rather than emit garbage residuals.
    for (std::size_t j = 0; j < n; ++j) {
        const double gap = std::remainder(
            chart.base_theta[(j + 1) % n] - chart.base_theta[j], kTwoPi);
        if (std::abs(gap) < 1e-4)
            throw degenerate_spectrum_error(
                "theta_mu_brackets: near-degenerate eigenvalues condition the chart too badly");
    }
    BracketReport rep;
    auto theta_fn = [&](std::size_t l) {
        return [&chart, l](const cvector& a) { return cplx{chart(a).first[l], 0.0}; };
    };
    auto logmu_fn = [&](std::size_t j) {
        return [&chart, j](const cvector& a) { return cplx{std::log(chart(a).second[j]), 0.0}; };
    };
    auto half_log_ratio_fn = [&](std::size_t j) {
        return [&chart, j, n](const cvector& a) {
            auto [th, mu] = chart(a);
            return cplx{0.5 * std::log(mu[j] / mu[n - 1]), 0.0};
        };
    };
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t j = 0; j < n; ++j) {
            const cplx br = al_bracket(theta_fn(l), logmu_fn(j), v);
            const double target = 2.0 * (l == j ? 1.0 : 0.0) - 2.0 * chart.base_mass[l];
            push(rep, "{th" + std::to_string(l) + ",logmu" + std::to_string(j) + "}",
                 std::abs(br - target), 1e-5);
        }
        for (std::size_t k = l + 1; k < n; ++k)
            push(rep, "{th" + std::to_string(l) + ",th" + std::to_string(k) + "}",
                 std::abs(al_bracket(theta_fn(l), theta_fn(k), v)), 1e-6);
    }
    for (std::size_t l = 0; l + 1 < n; ++l)
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const cplx br = al_bracket(theta_fn(l), half_log_ratio_fn(j), v);
            push(rep, "{th" + std::to_string(l) + ",halflog" + std::to_string(j) + "}",
                 std::abs(br - (l == j ? 1.0 : 0.0)), 1e-5);
        }
    return rep;
}

double psi_qrs(double theta_q, double theta_r, double theta_s) {
    auto cot_half = [](double x) {
        const double t = std::tan(0.5 * x);
        if (t == 0.0) throw pole_error("psi_qrs: coincident angles");
        return 1.0 / t;
    };
    return 2.0 * cot_half(theta_q - theta_r) + 2.0 * cot_half(theta_r - theta_s) +
           2.0 * cot_half(theta_s - theta_q);
}

MassBracketCheck mass_brackets(const VerblunskyCoefficients& v, std::size_t q, std::size_t r) {
    const std::size_t n = v.n();
    if (q >= n || r >= n) throw validation_error("mass_brackets: index out of range");
    ThetaMuChart chart(v);
    if (q == r) return {0.0, 0.0};
    auto logmu_fn = [&](std::size_t j) {
        return [&chart, j](const cvector& a) { return cplx{std::log(chart(a).second[j]), 0.0}; };
    };
    const cplx fd = al_bracket(logmu_fn(q), logmu_fn(r), v);
    double closed = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == q || k == r) continue;  // Psi vanishes with coincident indices
        closed += chart.base_mass[k] *
                  psi_qrs(chart.base_theta[q], chart.base_theta[r], chart.base_theta[k]);
    }
    return {fd.real(), closed};
}

double shift_kernel(double x) {
    const double ax = std::abs(x);
    if (ax <= 1e-8 || ax >= kTwoPi - 1e-8)
        throw pole_error("shift_kernel: argument within 1e-8 of 0 mod 2pi");
    // t cot(xt/2) extends continuously to 2/x at t = 0.
    auto integrand = [x](double t) {
        if (t <= 0.0) return 2.0 / x;
        return t / std::tan(0.5 * x * t);
    };
    return 2.0 * integrate_adaptive(integrand, 0.0, 1.0, 1e-12);
}

std::vector<double> canonical_shift(std::span<const double> thetas, double eta) {
    const std::size_t n = thetas.size();
    if (n < 2) throw validation_error("canonical_shift: need at least two angles");
    double sum = 0.0;
    for (double t : thetas) sum += t;
    if (std::abs(sum - eta) > 1e-10)
        throw validation_error("canonical_shift: representatives must satisfy sum(theta) = eta");
    std::vector<double> out(n - 1, 0.0);
    for (std::size_t l = 0; l + 1 < n; ++l) {
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (k == l) continue;
            acc += thetas[k] * (shift_kernel(thetas[k] - thetas[l]) +
                                shift_kernel(thetas[l] + eta - thetas[n - 1]) +
                                shift_kernel(thetas[n - 1] - eta - thetas[k]));
        }
        out[l] = acc;
    }
    return out;
}

JacobianCheck jacobian_check(const VerblunskyCoefficients& v) {
    const std::size_t n = v.n();
    const SpectralMeasure m0 = measure_of(build_cmv(v));
    // Coordinates x = (th_1, mu_1, ..., th_{n-1}, mu_{n-1}, th_n); mu_n is
    // dependent through the mass constraint.
    std::vector<double> x0(2 * n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        x0[2 * j] = m0.theta(j);
        x0[2 * j + 1] = m0.mass(j);
    }
    x0[2 * n - 2] = m0.theta(n - 1);

    auto alphas_at = [n](const std::vector<double>& x) {
        std::vector<Atom> atoms(n);
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            atoms[j] = {x[2 * j], x[2 * j + 1]};
            acc += x[2 * j + 1];
        }
        atoms[n - 1] = {x[2 * n - 2], 1.0 - acc};
        return verblunsky_of_measure(SpectralMeasure{std::move(atoms)}).alphas();
    };

    double h = 1e-6;
    double min_mass = m0.mass(0);
    for (std::size_t j = 1; j < n; ++j) min_mass = std::min(min_mass, m0.mass(j));
    while (min_mass < 10.0 * h) {  // keep probes away from the mass boundary
        h /= 10.0;
        if (h < 1e-9)
            throw numerical_error("jacobian_check: masses too small for finite differences");
    }

    const cvector a0 = alphas_at(x0);
    Matrix jac(2 * n - 1, 2 * n - 1);
    for (std::size_t col = 0; col < 2 * n - 1; ++col) {
        std::vector<double> xp = x0, xm = x0;
        xp[col] += h;
        xm[col] -= h;
        const cvector ap = alphas_at(xp), am = alphas_at(xm);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            jac(2 * k, col) = (ap[k].real() - am[k].real()) / (2.0 * h);
            jac(2 * k + 1, col) = (ap[k].imag() - am[k].imag()) / (2.0 * h);
        }
        const double dphi =
            (std::arg(ap[n - 1] / a0[n - 1]) - std::arg(am[n - 1] / a0[n - 1])) / (2.0 * h);
        jac(2 * n - 2, col) = dphi;
    }
    const double numeric = determinant(jac).real();
    double closed = -std::pow(2.0, 1.0 - static_cast<double>(n));
    for (std::size_t k = 0; k + 1 < n; ++k) closed *= 1.0 - std::norm(a0[k]);
    for (std::size_t j = 0; j < n; ++j) closed /= m0.mass(j);
    return {numeric, closed};
}

}  // namespace cmv
