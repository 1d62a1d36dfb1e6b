#include "cmvkit/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "cmvkit/errors.hpp"
#include "cmvkit/spectral.hpp"

namespace cmv {

namespace {

// Step schedule from the alternating algorithm (1-based): step 1 reflects
// column 1, even step s reflects row s-1, odd step s >= 3 reflects column
// s-2; every step uses level s. The last step degenerates to a diagonal
// rotation.
struct Step {
    std::size_t index;  // 0-based row or column
    bool is_column;
};

Step step_target(std::size_t s) {
    if (s == 1) return {0, true};
    if (s % 2 == 0) return {s - 2, false};
    return {s - 2, true};
}

cvector step_vector(const Matrix& w, Step st) {
    const std::size_t n = w.rows();
    cvector u(n);
    if (st.is_column)
        for (std::size_t i = 0; i < n; ++i) u[i] = w(i, st.index);
    else
        for (std::size_t i = 0; i < n; ++i) u[i] = std::conj(w(st.index, i));
    return u;
}

double exposed_candidate(const cvector& u, std::size_t level) {
    double s2 = 0.0;
    for (std::size_t i = level; i < u.size(); ++i) s2 += std::norm(u[i]);
    return std::sqrt(s2);
}

}  // namespace

CmvifyResult cmvify(const Matrix& u) {
    if (!u.is_square() || u.rows() == 0)
        throw validation_error("cmvify: nonempty square input required");
    if (unitarity_defect(u) > kUnitaryTol)
        throw validation_error("cmvify: input is not unitary to tolerance");
    const std::size_t n = u.rows();

    // Pre-check cyclicity through the masses at e_1.
    if (n >= 2) {
        EigenDecomposition e = eig_unitary(u);
        for (std::size_t j = 0; j < n; ++j)
            if (std::norm(e.vectors(0, j)) < 1e-12)
                throw not_cyclic_error("cmvify: e_1 mass vanishes; e_1 is not cyclic", 0);
    }

    Matrix w = u;
    Matrix conj = Matrix::identity(n);
    std::size_t conjugations = 0, applications = 0;
    for (std::size_t s = 1; s < n; ++s) {
        const Step st = step_target(s);
        const cvector vec = step_vector(w, st);
        if (exposed_candidate(vec, s) <= kExposedTol)
            throw not_cyclic_error("cmvify: exposed entry collapsed", s);
        const Reflector r = householder_reflector(vec, s);
        if (!r.is_identity()) {
            const Matrix sm = r.as_matrix();
            w = sm * w * sm.adjoint();
            conj = conj * sm.adjoint();
        }
        conjugations += 1;
        applications += 2;
    }
    // Scrub roundoff outside the staircase so downstream shape checks are exact.
    for (const ShapeViolation& v : check_cmv_shape(w, 0.0).violations)
        if (v.kind == ShapeViolation::Kind::nonzero_outside_staircase) {
            if (std::abs(w(v.row - 1, v.col - 1)) > 1e-11)
                throw numerical_error("cmvify: residue outside the staircase");
            w(v.row - 1, v.col - 1) = 0.0;
        }
    return {as_cmv_matrix(w), std::move(conj), conjugations, applications};
}

std::vector<CmvBlock> cmvify_split(const Matrix& u) {
    if (!u.is_square() || u.rows() == 0)
        throw validation_error("cmvify_split: nonempty square input required");
    if (unitarity_defect(u) > kUnitaryTol)
        throw validation_error("cmvify_split: input is not unitary to tolerance");

    std::vector<CmvBlock> out;
    Matrix work = u;
    std::size_t offset = 0;
    while (work.rows() > 0) {
        const std::size_t q = work.rows();
        Matrix w = work;
        std::size_t block = q;  // size of the invariant block found
        for (std::size_t s = 1; s < q; ++s) {
            const Step st = step_target(s);
            const cvector vec = step_vector(w, st);
            const double scale = std::max(vector_norm(vec), 1e-30);
            if (exposed_candidate(vec, s) < 1e-10 * scale) {
                block = s;
                break;
            }
            const Reflector r = householder_reflector(vec, s);
            if (!r.is_identity()) {
                const Matrix sm = r.as_matrix();
                w = sm * w * sm.adjoint();
            }
        }
        Matrix head(block, block);
        for (std::size_t i = 0; i < block; ++i)
            for (std::size_t j = 0; j < block; ++j) head(i, j) = w(i, j);
        if (block >= 2) {
            for (const ShapeViolation& v : check_cmv_shape(head, 0.0).violations)
                if (v.kind == ShapeViolation::Kind::nonzero_outside_staircase &&
                    std::abs(head(v.row - 1, v.col - 1)) <= 1e-10)
                    head(v.row - 1, v.col - 1) = 0.0;
        }
        if (block == 1) {
            const cplx z = head(0, 0);
            out.push_back({CMVMatrix{head, VerblunskyCoefficients{{std::conj(z)}}}, offset, 1});
        } else {
            out.push_back({as_cmv_matrix(head), offset, block});
        }
        if (block == q) break;
        Matrix tail(q - block, q - block);
        for (std::size_t i = 0; i < q - block; ++i)
            for (std::size_t j = 0; j < q - block; ++j) tail(i, j) = w(block + i, block + j);
        offset += block;
        work = std::move(tail);
    }
    return out;
}

}  // namespace cmv
