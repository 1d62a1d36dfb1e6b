#pragma once

#include <functional>

namespace cmv {

/// Adaptive Simpson on [a, b] to the given absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12);

}  // namespace cmv
