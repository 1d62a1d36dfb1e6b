#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cmvkit/errors.hpp"
#include "cmvkit/spectral.hpp"
#include "test_support.hpp"

using namespace cmv;
using namespace cmvtest;

TEST_CASE("measure invariants and moments") {
    SpectralMeasure m = random_measure(6, 17);
    CHECK(std::abs(m.moment(0) - 1.0) < 1e-15);
    for (long p : {1L, 2L, 5L})
        CHECK(std::abs(m.moment(-p) - std::conj(m.moment(p))) < 1e-15);

    std::vector<Atom> bad{{0.0, 0.5}, {1e-12, 0.5}};
    CHECK_THROWS_AS(SpectralMeasure{bad}, validation_error);
    std::vector<Atom> notnorm{{0.0, 0.5}, {1.0, 0.6}};
    CHECK_THROWS_AS(SpectralMeasure{notnorm}, validation_error);
}

TEST_CASE("measure_of on explicit matrices") {
    // n=1: [abar_0] has its atom at arg(abar_0) = -arg(alpha_0)
    VerblunskyCoefficients v1{{std::polar(1.0, 0.8)}};
    SpectralMeasure m1 = measure_of(build_cmv(v1));
    CHECK(m1.n() == 1);
    CHECK(std::abs(std::remainder(m1.theta(0) - (-0.8), 2.0 * kPi)) < 1e-14);
    CHECK(m1.mass(0) == doctest::Approx(1.0));

    // alpha = (0, 1): [[0,1],[1,0]] has atoms at 0 and pi with equal mass
    VerblunskyCoefficients v2{{cplx{0.0, 0.0}, cplx{1.0, 0.0}}};
    SpectralMeasure m2 = measure_of(build_cmv(v2));
    CHECK(std::abs(m2.theta(0)) < 1e-12);
    CHECK(std::abs(m2.theta(1) - kPi) < 1e-12);
    CHECK(m2.mass(0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(m2.mass(1) == doctest::Approx(0.5).epsilon(1e-10));

    // random build: masses positive, sum exactly one
    SpectralMeasure m6 = measure_of(build_cmv(random_alphas(6, 123)));
    double sum = 0.0;
    for (const Atom& a : m6.atoms()) {
        CHECK(a.mass > 0.0);
        sum += a.mass;
    }
    CHECK(std::abs(sum - 1.0) < 1e-15);
}

TEST_CASE("szego inverse on explicit measures") {
    // single atom at theta: alpha_0 = e^{-i theta}
    std::vector<Atom> one{{1.234, 1.0}};
    VerblunskyCoefficients a1 = verblunsky_of_measure(SpectralMeasure{one});
    CHECK(std::abs(a1.alpha(0) - std::polar(1.0, -1.234)) < 1e-14);

    // atoms {0, pi}, equal mass: alpha = (0, 1); moment table mu(+-1)=0, mu(+-2)=1
    std::vector<Atom> two{{0.0, 0.5}, {kPi, 0.5}};
    SpectralMeasure m2{two};
    CHECK(std::abs(m2.moment(1)) < 1e-15);
    CHECK(std::abs(m2.moment(2) - 1.0) < 1e-15);
    VerblunskyCoefficients a2 = verblunsky_of_measure(m2);
    CHECK(std::abs(a2.alpha(0)) < 1e-14);
    CHECK(std::abs(a2.alpha(1) - 1.0) < 1e-14);

    // rank collapse: the third atom is too light to support degree 3, so an
    // interior coefficient lands on the circle boundary
    std::vector<Atom> thin{{0.0, (1.0 - 2e-16) / 2}, {kPi, (1.0 - 2e-16) / 2}, {1.0, 2e-16}};
    CHECK_THROWS_AS((void)verblunsky_of_measure(SpectralMeasure{thin}), rank_error);
}

TEST_CASE("szego norms follow the rho product") {
    VerblunskyCoefficients v = random_alphas(6, 77);
    SpectralMeasure m = measure_of(build_cmv(v));
    VerblunskyCoefficients back = verblunsky_of_measure(m);
    for (std::size_t k = 0; k + 1 < 6; ++k)
        CHECK(std::abs(back.rho(k) - v.rho(k)) < 1e-10);

    // independent oracle: classical Gram-Schmidt on the monomial value
    // table gives ||Phi_k|| = prod_{l<k} rho_l directly
    const std::size_t n = 6;
    std::vector<cvector> phi;  // values of the monic orthogonal polynomials
    auto ip = [&](const cvector& f, const cvector& g) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m.mass(j) * std::conj(f[j]) * g[j];
        return s;
    };
    for (std::size_t k = 0; k < n; ++k) {
        cvector col(n);
        for (std::size_t j = 0; j < n; ++j) col[j] = std::pow(m.z(j), static_cast<double>(k));
        for (std::size_t l = 0; l < k; ++l) {
            const cplx coef = ip(phi[l], col) / ip(phi[l], phi[l]);
            for (std::size_t j = 0; j < n; ++j) col[j] -= coef * phi[l][j];
        }
        phi.push_back(col);
        double prod = 1.0;
        for (std::size_t l = 0; l < k; ++l) prod *= v.rho(l);
        CHECK(std::abs(std::sqrt(ip(col, col).real()) - prod) < 1e-10);
    }
}

TEST_CASE("round trips both ways") {
    for (std::size_t n : {2u, 4u, 8u, 12u}) {
        VerblunskyCoefficients v = random_alphas(n, 3000 + n);
        double drift = 0.0;
        VerblunskyCoefficients back = verblunsky_of_measure(measure_of(build_cmv(v)), &drift);
        CHECK(max_diff(back.alphas(), v.alphas()) < 1e-9);
        CHECK(drift < 1e-10);
    }
    for (std::size_t n : {2u, 5u, 9u}) {
        SpectralMeasure m = random_measure(n, 4000 + n);
        SpectralMeasure m2 = measure_of(build_cmv(verblunsky_of_measure(m)));
        CHECK(measure_distance(m, m2) < 1e-9);
    }
}

TEST_CASE("toeplitz determinants, heine, cauchy-binet") {
    SpectralMeasure m = random_measure(8, 55);

    // m=1: d0 = 1, d1 = moment(-1)
    auto [d0, d1] = toeplitz_dets(m, 1);
    CHECK(std::abs(d0 - 1.0) < 1e-15);
    CHECK(std::abs(d1 - m.moment(-1)) < 1e-15);

    // explicit two-atom table: d0 = 1, d1 = -1, heine alpha_1 = 1
    std::vector<Atom> two{{0.0, 0.5}, {kPi, 0.5}};
    SpectralMeasure m2{two};
    auto [e0, e1] = toeplitz_dets(m2, 2);
    CHECK(std::abs(e0 - 1.0) < 1e-14);
    CHECK(std::abs(e1 + 1.0) < 1e-14);
    CHECK(std::abs(heine_alpha(m2, 2) - 1.0) < 1e-14);

    // oracle agreement and the closed-form d0 product
    VerblunskyCoefficients v = verblunsky_of_measure(m);
    for (std::size_t order = 1; order <= 4; ++order) {
        auto [t0, t1] = toeplitz_dets(m, order);
        auto [c0, c1] = cauchy_binet_oracle(m, order);
        CHECK(std::abs(t0 - c0) < 1e-10);
        CHECK(std::abs(t1 - c1) < 1e-10);
        CHECK(t0.real() > 0.0);
        CHECK(std::abs(t0.imag()) < 1e-12);
        double prod = 1.0;
        for (std::size_t j = 0; j + 1 < order; ++j)
            prod *= std::pow(v.rho(j) * v.rho(j), static_cast<double>(order - j - 1));
        CHECK(std::abs(t0 - prod) < 1e-9);
        CHECK(std::abs(heine_alpha(m, order) - v.alpha(order - 1)) < 1e-9);
    }

    // cauchy-binet edge cases: full order has a single multi-index
    auto [f0, f1] = cauchy_binet_oracle(m, 8);
    double w = 1.0;
    cplx zb = 1.0;
    for (std::size_t a = 0; a < 8; ++a) {
        w *= m.mass(a);
        zb *= std::conj(m.z(a));
        for (std::size_t b = a + 1; b < 8; ++b) w *= std::norm(m.z(b) - m.z(a));
    }
    CHECK(std::abs(f0 - w) < 1e-12 * std::abs(w) + 1e-300);
    CHECK(std::abs(f1 - w * zb) < 1e-12 * std::abs(w) + 1e-300);
}

TEST_CASE("toeplitz d0 is one when all interior coefficients vanish") {
    cvector az(5, cplx{0.0, 0.0});
    az[4] = std::polar(1.0, 0.9);
    SpectralMeasure m = measure_of(build_cmv(VerblunskyCoefficients{az}));
    for (std::size_t order = 1; order <= 5; ++order)
        CHECK(std::abs(toeplitz_dets(m, order).first - 1.0) < 1e-10);
}

TEST_CASE("dual inverse paths agree for every order") {
    for (std::size_t n : {3u, 6u}) {
        SpectralMeasure m = random_measure(n, 600 + n);
        VerblunskyCoefficients v = verblunsky_of_measure(m);
        for (std::size_t order = 1; order <= n; ++order)
            CHECK(std::abs(heine_alpha(m, order) - v.alpha(order - 1)) < 1e-9);
    }
}

TEST_CASE("degenerate spectrum is rejected") {
    // direct sum duplicates an eigenvalue; detected through the gap guard
    std::vector<Atom> atoms{{1.0, 0.3}, {1.0 + 5e-11, 0.7}};
    CHECK_THROWS_AS(SpectralMeasure{atoms}, validation_error);
}
