#include "cmvkit/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "cmvkit/errors.hpp"

namespace cmv {

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

cplx Matrix::trace() const {
    assert(is_square());
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const cplx& v : a_) m = std::max(m, std::abs(v));
    return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (cplx& v : a_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

cvector operator*(const Matrix& a, const cvector& x) {
    assert(a.cols() == x.size());
    cvector y(a.rows(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::identity(u.rows())).max_abs();
}

bool is_finite(const Matrix& m) {
    for (const cplx& v : m.data())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double vector_norm(const cvector& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

namespace {

// LU with partial pivoting; returns permutation sign, modifies a in place.
// Throws if a pivot vanishes entirely.
int lu_decompose(Matrix& a, std::vector<std::size_t>& piv) {
    const std::size_t n = a.rows();
    piv.resize(n);
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); p = i; }
        if (best == 0.0) throw singular_matrix_error("matrix is singular");
        piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const cplx f = a(i, k);
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return sign;
}

}  // namespace

cplx determinant(Matrix a) {
    assert(a.is_square());
    if (a.rows() == 0) return 1.0;
    std::vector<std::size_t> piv;
    int sign;
    try {
        sign = lu_decompose(a, piv);
    } catch (const singular_matrix_error&) {
        return 0.0;
    }
    cplx d = static_cast<double>(sign);
    for (std::size_t i = 0; i < a.rows(); ++i) d *= a(i, i);
    return d;
}

Matrix inverse(const Matrix& a) {
    assert(a.is_square());
    const std::size_t n = a.rows();
    Matrix lu = a;
    std::vector<std::size_t> piv;
    lu_decompose(lu, piv);
    Matrix out = Matrix::identity(n);
    // Solve A X = I column by column: apply row swaps, then two substitutions.
    for (std::size_t k = 0; k < n; ++k)
        if (piv[k] != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(out(k, j), out(piv[k], j));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) out(i, j) -= lu(i, k) * out(k, j);
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t k = ii + 1; k < n; ++k) out(ii, j) -= lu(ii, k) * out(k, j);
            out(ii, j) /= lu(ii, ii);
        }
    }
    return out;
}

}  // namespace cmv
