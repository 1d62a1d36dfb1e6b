#pragma once

#include <vector>

#include "cmvkit/cmv.hpp"

namespace cmv {

struct CmvifyResult {
    CMVMatrix cmv;
    Matrix conjugator;                  // unitary, first column exactly e_1
    std::size_t conjugations = 0;       // two-sided steps (n - 1 for n x n input)
    std::size_t reflector_applications = 0;  // one-sided multiplications (2n - 2)
};

/// Householder reduction to CMV shape by alternating column/row
/// conjugations; c = conjugator^dag * u * conjugator, spectral measure at
/// e_1 preserved. Throws not_cyclic_error when an exposed entry that
/// cyclicity guarantees positive collapses.
CmvifyResult cmvify(const Matrix& u);

struct CmvBlock {
    CMVMatrix cmv;
    std::size_t offset;  // 0-based start of the basis-index range
    std::size_t size;
};

/// Direct-sum variant: closes a block whenever a would-be exposed entry
/// falls below the scale-invariant threshold and restarts on the trailing
/// principal submatrix.
std::vector<CmvBlock> cmvify_split(const Matrix& u);

}  // namespace cmv
