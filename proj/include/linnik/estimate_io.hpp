#pragma once

#include <iosfwd>
#include <string>

#include "linnik/estimators.hpp"

namespace linnik {

/// JSON object with keys alpha_hat, gamma_hat, method, n, stderr_alpha,
/// stderr_gamma, ci_alpha, ci_gamma, epsilon, diagnostics. Absent optional
/// values are null; intervals are two-element arrays.
std::string estimate_to_json(const EstimateResult& result, int indent = 2);

/// Header line plus one data line; absent values are empty fields.
void write_estimate_csv(std::ostream& out, const EstimateResult& result);

}  // namespace linnik
