#include "cmvkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmvkit/errors.hpp"

namespace cmv {

namespace {
constexpr double kDegenerateTol = 1e-13;
}

cvector Reflector::apply(std::span<const cplx> x) const {
    cvector y(x.begin(), x.end());
    if (!v.empty()) {
        double vv = 0.0;
        for (const cplx& c : v) vv += std::norm(c);
        cplx vx = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) vx += std::conj(v[i]) * y[i];
        const cplx f = 2.0 * vx / vv;
        for (std::size_t i = 0; i < v.size(); ++i) y[i] -= f * v[i];
    }
    if (phase != cplx{1.0, 0.0}) y[level] *= phase;
    return y;
}

Matrix Reflector::as_matrix() const {
    Matrix s = Matrix::identity(n_);
    if (!v.empty()) {
        double vv = 0.0;
        for (const cplx& c : v) vv += std::norm(c);
        for (std::size_t i = level; i < n_; ++i)
            for (std::size_t j = level; j < n_; ++j)
                s(i, j) -= 2.0 * v[i] * std::conj(v[j]) / vv;
    }
    if (phase != cplx{1.0, 0.0})
        for (std::size_t j = 0; j < n_; ++j) s(level, j) *= phase;
    return s;
}

Reflector householder_reflector(std::span<const cplx> u, std::size_t m) {
    const std::size_t n = u.size();
    if (m >= n) throw validation_error("householder_reflector: level out of range");
    Reflector out;
    out.n_ = n;
    out.level = m;

    double tail2 = 0.0;
    for (std::size_t i = m; i < n; ++i) tail2 += std::norm(u[i]);
    const double s = std::sqrt(tail2);
    double sub2 = 0.0;
    for (std::size_t i = m + 1; i < n; ++i) sub2 += std::norm(u[i]);
    const double sub = std::sqrt(sub2);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::norm(u[i]);
    scale = std::max(std::sqrt(scale), 1.0);

    if (s <= kDegenerateTol * scale) return out;  // wholly zero tail: identity
    const cplx um = u[m];
    if (sub <= kDegenerateTol * scale) {
        // Only the pivot survives; a diagonal rotation suffices.
        if (std::abs(um.imag()) <= kDegenerateTol * scale && um.real() >= 0.0) return out;
        out.phase = s / um;
        out.phase /= std::abs(out.phase);
        return out;
    }
    // alpha = u_{m+1} - (u_{m+1}/|u_{m+1}|) s, phase 1 when the pivot vanishes.
    const cplx alpha = (std::abs(um) <= kDegenerateTol * scale)
                           ? cplx{-s, 0.0}
                           : um - (um / std::abs(um)) * s;
    out.v.assign(n, cplx{0.0, 0.0});
    out.v[m] = alpha;
    for (std::size_t i = m + 1; i < n; ++i) out.v[i] = u[i];
    const cplx w = um - alpha;  // |w| = s
    out.phase = s / w;
    out.phase /= std::abs(out.phase);
    return out;
}

QrFactors qr_positive(const Matrix& a) {
    if (!a.is_square()) throw validation_error("qr_positive: square input required");
    if (!is_finite(a)) throw validation_error("qr_positive: non-finite entries");
    const std::size_t n = a.rows();
    Matrix r = a;
    Matrix q = Matrix::identity(n);
    const double scale = std::max(a.max_abs(), 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        cvector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = r(i, k);
        double tail = 0.0;
        for (std::size_t i = k; i < n; ++i) tail += std::norm(col[i]);
        if (std::sqrt(tail) <= 1e-14 * scale)
            throw singular_matrix_error("qr_positive: column collapsed");
        Reflector h = householder_reflector(col, k);
        const Matrix s = h.as_matrix();
        r = s * r;
        q = q * s.adjoint();
    }
    // Clean roundoff below the diagonal and force positive pivots exactly.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) r(i, j) = 0.0;
        const cplx d = r(i, i);
        if (std::abs(d) <= 1e-14 * scale)
            throw singular_matrix_error("qr_positive: zero pivot");
        const cplx ph = d / std::abs(d);
        for (std::size_t j = i; j < n; ++j) r(i, j) *= std::conj(ph);
        r(i, i) = cplx{r(i, i).real(), 0.0};
        for (std::size_t ii = 0; ii < n; ++ii) q(ii, i) *= ph;
    }
    return {std::move(q), std::move(r)};
}

LqFactors lq_unitary_factor(const Matrix& a) {
    QrFactors f = qr_positive(a.adjoint());  // a^dag = Q R  =>  a = R^dag Q^dag
    return {f.r.adjoint(), std::move(f.q)};
}

HessenbergForm hessenberg(const Matrix& a) {
    if (!a.is_square()) throw validation_error("hessenberg: square input required");
    const std::size_t n = a.rows();
    Matrix h = a;
    Matrix q = Matrix::identity(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        cvector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = h(i, k);
        Reflector refl = householder_reflector(col, k + 1);
        if (refl.is_identity()) continue;
        const Matrix s = refl.as_matrix();
        h = s * h * s.adjoint();
        q = q * s.adjoint();
    }
    return {std::move(h), std::move(q)};
}

namespace {

// Givens rotation zeroing b in (a, b): [c, s; -conj(s), conj(c)].
struct Givens {
    cplx c, s;
};

Givens make_givens(cplx a, cplx b) {
    const double r = std::hypot(std::abs(a), std::abs(b));
    if (r == 0.0 || std::abs(b) == 0.0) return {1.0, 0.0};
    return {std::conj(a) / r, std::conj(b) / r};
}

cplx wilkinson_shift(cplx h00, cplx h01, cplx h10, cplx h11) {
    const cplx tr = h00 + h11;
    const cplx det = h00 * h11 - h01 * h10;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx l1 = (tr + disc) / 2.0;
    cplx l2 = (tr - disc) / 2.0;
    return std::abs(l1 - h11) < std::abs(l2 - h11) ? l1 : l2;
}

}  // namespace

EigenDecomposition eig_unitary(const Matrix& u) {
    if (!u.is_square()) throw validation_error("eig_unitary: square input required");
    if (!is_finite(u)) throw validation_error("eig_unitary: non-finite entries");
    const std::size_t n = u.rows();
    if (unitarity_defect(u) > kUnitaryTol)
        throw validation_error("eig_unitary: input is not unitary to tolerance");
    if (n == 0) return {{}, Matrix(0, 0)};

    HessenbergForm hf = hessenberg(u);
    Matrix& h = hf.h;
    Matrix& q = hf.q;

    // Shifted QR, explicit Givens sweeps; deflate when a subdiagonal entry
    // falls below (|h_kk| + |h_{k+1,k+1}|) * 1e-14.
    auto deflated = [&](std::size_t k) {
        const double thr = (std::abs(h(k, k)) + std::abs(h(k + 1, k + 1))) * 1e-14;
        if (std::abs(h(k + 1, k)) <= thr) {
            h(k + 1, k) = 0.0;
            return true;
        }
        return false;
    };

    std::size_t hi = n - 1;
    std::size_t total_sweeps = 0;
    std::size_t stall = 0;
    const std::size_t max_total = 200 * n;
    while (hi > 0) {
        if (deflated(hi - 1)) {
            hi--;
            stall = 0;
            continue;
        }
        std::size_t lo = hi;
        while (lo > 0 && !deflated(lo - 1)) lo--;
        if (++total_sweeps > max_total)
            throw convergence_error("eig_unitary: QR iteration did not converge", total_sweeps);
        cplx shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        if (++stall % 25 == 0) {  // periodic exceptional shift breaks symmetric stalls
            const double mag = std::max(std::abs(h(hi, hi)), std::abs(h(hi, hi - 1)));
            shift = mag * std::exp(cplx{0.0, 0.37 * static_cast<double>(stall)});
        }
        // Shifted QR sweep on the active block: H <- R Q + shift I.
        Matrix hb(hi - lo + 1, hi - lo + 1);
        for (std::size_t i = 0; i <= hi - lo; ++i)
            for (std::size_t j = 0; j <= hi - lo; ++j) hb(i, j) = h(lo + i, lo + j);
        const std::size_t m = hi - lo + 1;
        for (std::size_t i = 0; i < m; ++i) hb(i, i) -= shift;
        std::vector<Givens> rot(m - 1);
        for (std::size_t k = 0; k + 1 < m; ++k) {
            rot[k] = make_givens(hb(k, k), hb(k + 1, k));
            for (std::size_t j = k; j < m; ++j) {
                const cplx x = hb(k, j), y = hb(k + 1, j);
                hb(k, j) = rot[k].c * x + rot[k].s * y;
                hb(k + 1, j) = -std::conj(rot[k].s) * x + std::conj(rot[k].c) * y;
            }
        }
        for (std::size_t k = 0; k + 1 < m; ++k) {  // R Q: apply G_k^dag on the right
            for (std::size_t i = 0; i <= std::min(k + 2, m - 1); ++i) {
                const cplx x = hb(i, k), y = hb(i, k + 1);
                hb(i, k) = x * std::conj(rot[k].c) + y * std::conj(rot[k].s);
                hb(i, k + 1) = -x * rot[k].s + y * rot[k].c;
            }
            for (std::size_t i = 0; i < n; ++i) {  // accumulate Q
                const cplx x = q(i, lo + k), y = q(i, lo + k + 1);
                q(i, lo + k) = x * std::conj(rot[k].c) + y * std::conj(rot[k].s);
                q(i, lo + k + 1) = -x * rot[k].s + y * rot[k].c;
            }
        }
        for (std::size_t i = 0; i < m; ++i) hb(i, i) += shift;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) h(lo + i, lo + j) = hb(i, j);
    }

    // h is now (numerically) upper triangular; eigenvectors by back-substitution.
    cvector vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = h(i, i);
    Matrix vecs(n, n);
    const double hnorm = std::max(h.max_abs(), 1e-300);
    for (std::size_t i = 0; i < n; ++i) {
        cvector y(n, cplx{0.0, 0.0});
        y[i] = 1.0;
        for (std::size_t jj = i; jj-- > 0;) {
            cplx s = 0.0;
            for (std::size_t k = jj + 1; k <= i; ++k) s += h(jj, k) * y[k];
            cplx d = h(jj, jj) - vals[i];
            if (std::abs(d) < 1e-300 * hnorm) d = cplx{1e-300 * hnorm, 0.0};
            y[jj] = -s / d;
        }
        cvector v = q * y;
        const double nv = vector_norm(v);
        for (std::size_t r2 = 0; r2 < n; ++r2) vecs(r2, i) = v[r2] / nv;
    }

    // Deterministic order: ascending principal argument in [0, 2pi),
    // ties broken by first-component magnitude of the eigenvector.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto princ = [](cplx z) {
        double a = std::arg(z);
        if (a < 0.0) a += 2.0 * std::acos(-1.0);
        return a;
    };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double pa = princ(vals[a]), pb = princ(vals[b]);
        if (std::abs(pa - pb) > 1e-12) return pa < pb;
        return std::abs(vecs(0, a)) > std::abs(vecs(0, b));
    });
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = vals[idx[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vecs(i, idx[j]);
    }
    return out;
}

Matrix matrix_function(const Matrix& u, const std::function<cplx(cplx)>& g) {
    EigenDecomposition e = eig_unitary(u);
    const std::size_t n = u.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = g(e.values[i]);
    return e.vectors * d * e.vectors.adjoint();
}

Splitting project_la(const Matrix& x) {
    if (!x.is_square()) throw validation_error("project_la: square input required");
    const std::size_t n = x.rows();
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = cplx{0.0, x(i, i).imag()};
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = x(i, j);
            a(j, i) = -std::conj(x(i, j));
        }
    }
    return {x - a, std::move(a)};
}

Matrix pi_anti(const Matrix& x) { return project_la(x).anti; }
Matrix pi_lower(const Matrix& x) { return project_la(x).lower; }

Matrix r_map(const Matrix& x) {
    Splitting s = project_la(x);
    return s.lower - s.anti;
}

double pairing(const Matrix& x, const Matrix& y) {
    assert(x.cols() == y.rows() && y.cols() == x.rows());
    cplx t = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) t += x(i, k) * y(k, i);
    return t.imag();
}

}  // namespace cmv
