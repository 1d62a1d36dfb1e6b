#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmv {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: invariant violations, out-of-range coefficients, malformed data.
struct validation_error : error {
    using error::error;
};

// Numerical failures: singularity, non-convergence, rank collapse.
struct numerical_error : error {
    using error::error;
};

struct singular_matrix_error : numerical_error {
    using numerical_error::numerical_error;
};

struct convergence_error : numerical_error {
    convergence_error(const std::string& what, std::size_t sweeps)
        : numerical_error(what + " (sweeps: " + std::to_string(sweeps) + ")"),
          sweeps(sweeps) {}
    std::size_t sweeps;
};

struct not_cyclic_error : numerical_error {
    not_cyclic_error(const std::string& what, std::size_t step)
        : numerical_error(what + " (step " + std::to_string(step) + ")"), step(step) {}
    std::size_t step;
};

struct degenerate_spectrum_error : numerical_error {
    using numerical_error::numerical_error;
};

struct rank_error : numerical_error {
    using numerical_error::numerical_error;
};

struct pole_error : numerical_error {
    using numerical_error::numerical_error;
};

struct io_error : error {
    using error::error;
};

}  // namespace cmv
