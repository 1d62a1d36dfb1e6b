#include "cmvkit/hamiltonian.hpp"

#include <cmath>

#include "cmvkit/errors.hpp"

namespace cmv {

HierarchyHamiltonian::HierarchyHamiltonian(cvector f_coeffs) : c_(std::move(f_coeffs)) {
    while (c_.size() > 1 && c_.back() == cplx{0.0, 0.0}) c_.pop_back();
    if (c_.empty()) throw validation_error("hamiltonian: empty polynomial");
}

cplx HierarchyHamiltonian::f(cplx z) const {
    cplx acc = 0.0;
    for (std::size_t d = c_.size(); d-- > 0;) acc = acc * z + c_[d];
    return acc;
}

cplx HierarchyHamiltonian::f_prime(cplx z) const {
    cplx acc = 0.0;
    for (std::size_t d = c_.size(); d-- > 1;)
        acc = acc * z + static_cast<double>(d) * c_[d];
    return acc;
}

double HierarchyHamiltonian::F(double theta) const {
    const cplx z = std::polar(1.0, theta);
    return 2.0 * (z * f_prime(z)).real();
}

double HierarchyHamiltonian::phi(const Matrix& b) const {
    const std::size_t n = b.rows();
    Matrix acc(n, n);
    for (std::size_t d = c_.size(); d-- > 0;) {
        acc = acc * b;
        for (std::size_t i = 0; i < n; ++i) acc(i, i) += c_[d];
    }
    return acc.trace().imag();
}

Matrix HierarchyHamiltonian::f_prime_matrix(const Matrix& b) const {
    const std::size_t n = b.rows();
    Matrix acc(n, n);
    for (std::size_t d = c_.size(); d-- > 1;) {
        acc = acc * b;
        const cplx coef = static_cast<double>(d) * c_[d];
        for (std::size_t i = 0; i < n; ++i) acc(i, i) += coef;
    }
    return acc;
}

}  // namespace cmv
