#pragma once

#include "cmvkit/matrix.hpp"

namespace cmv {

// phi(B) = Im tr f(B) for a polynomial f; the induced symbol
// F(z) = 2 Re[z f'(z)] is real on the unit circle by construction.
class HierarchyHamiltonian {
public:
    explicit HierarchyHamiltonian(cvector f_coeffs);  // ascending degree

    const cvector& f_coeffs() const { return c_; }
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

    cplx f(cplx z) const;
    cplx f_prime(cplx z) const;
    double F(double theta) const;  // symbol at e^{i theta}

    double phi(const Matrix& b) const;      // Im tr f(B)
    Matrix f_prime_matrix(const Matrix& b) const;  // Horner, works off the unitary set

private:
    cvector c_;
};

}  // namespace cmv
