#pragma once

#include <string>

#include "cmvkit/cmv.hpp"
#include "cmvkit/spectral.hpp"

// JSON schemas (complex scalars as [re, im] pairs):
//   coefficients: {"alphas": [[re, im], ...]}
//   matrix:       {"rows": n, "cols": n, "data": [[re, im], ...]}  (row-major)
//   measure:      {"atoms": [{"theta": t, "mass": m}, ...]}

namespace cmv {

std::string to_json(const VerblunskyCoefficients& v);
std::string to_json(const Matrix& m);
std::string to_json(const SpectralMeasure& m);

VerblunskyCoefficients coefficients_from_json(const std::string& text);
Matrix matrix_from_json(const std::string& text);
SpectralMeasure measure_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cmv
