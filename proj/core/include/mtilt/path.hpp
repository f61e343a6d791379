#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mtilt/model.hpp"
#include "mtilt/rng.hpp"

namespace mtilt {

// A realized trajectory: n increments, n+1 partial sums starting at zero, and
// (once computed) the running quadratic characteristic. log_mgf_sum is set
// only on paths generated under a tilted law.
struct Path {
  std::vector<double> increments;
  std::vector<double> partial_sums;
  std::vector<double> quad_char;
  std::optional<double> log_mgf_sum;
};

// Running sums of the increments with compensated accumulation; result[0] is
// always zero and result.size() == increments.size() + 1. Throws
// InvalidInputError on any non-finite increment.
std::vector<double> partial_sums(std::span<const double> increments);

// Bundles increments with their partial sums.
Path make_path(std::vector<double> increments);

// Fills path.quad_char with the running sum of conditional variances along
// the realized history and returns it. The path must have model.steps()
// increments and consistent partial sums.
const std::vector<double>& quadratic_characteristic(const Model& model,
                                                    Path& path);

// Simulates one path under the model's base law.
Path simulate_path(const Model& model, RngStream& rng);

}  // namespace mtilt
