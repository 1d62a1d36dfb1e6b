#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace cmv {

using cplx = std::complex<double>;
using cvector = std::vector<cplx>;

// Dense complex matrix, row-major. Values are immutable by convention once
// an operation returns them; all operations below are pure.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return a_[i * cols_ + j];
    }

    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    Matrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx s);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_, cols_;
    std::vector<cplx> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);
cvector operator*(const Matrix& a, const cvector& x);

Matrix commutator(const Matrix& a, const Matrix& b);

/// max |(U^dag U - I)_{ij}|
double unitarity_defect(const Matrix& u);

/// No NaN or Inf entries.
bool is_finite(const Matrix& m);

/// Determinant by partially pivoted LU.
cplx determinant(Matrix a);

/// Inverse by LU solve; throws singular_matrix_error.
Matrix inverse(const Matrix& a);

double vector_norm(const cvector& v);

}  // namespace cmv
