#include "mtilt/path.hpp"

#include <cmath>

#include "mtilt/errors.hpp"
#include "mtilt/summation.hpp"

namespace mtilt {

std::vector<double> partial_sums(std::span<const double> increments) {
  std::vector<double> sums(increments.size() + 1);
  sums[0] = 0.0;
  CompensatedSum acc;
  for (std::size_t i = 0; i < increments.size(); ++i) {
    if (!std::isfinite(increments[i])) {
      throw InvalidInputError("path increments must be finite");
    }
    acc.add(increments[i]);
    sums[i + 1] = acc.value();
  }
  return sums;
}

Path make_path(std::vector<double> increments) {
  Path path;
  path.partial_sums = partial_sums(increments);
  path.increments = std::move(increments);
  return path;
}

const std::vector<double>& quadratic_characteristic(const Model& model,
                                                    Path& path) {
  const auto n = static_cast<std::size_t>(model.steps());
  if (path.increments.size() != n) {
    throw InvalidInputError("path length does not match the model");
  }
  if (path.partial_sums.size() != n + 1) {
    throw InvalidInputError("path partial sums are inconsistent");
  }
  path.quad_char.assign(n + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc.add(model.conditional_variance(path.partial_sums[i]));
    path.quad_char[i + 1] = acc.value();
  }
  return path.quad_char;
}

Path simulate_path(const Model& model, RngStream& rng) {
  const auto n = static_cast<std::size_t>(model.steps());
  Path path;
  path.increments.resize(n);
  path.partial_sums.resize(n + 1);
  path.partial_sums[0] = 0.0;
  const TiltedStepper stepper(model, 0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const int state = stepper.state(acc.value());
    const double xi = stepper.sample(state, rng);
    path.increments[i] = xi;
    acc.add(xi);
    path.partial_sums[i + 1] = acc.value();
  }
  return path;
}

}  // namespace mtilt
