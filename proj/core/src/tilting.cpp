#include "mtilt/tilting.hpp"

#include <cmath>

#include "mtilt/errors.hpp"

namespace mtilt {

void TiltConfig::validate(const Model& model) const {
  constants.validate();
  if (constants.n != model.steps()) {
    throw InvalidInputError("tilt constants declared for a different n");
  }
  const double limit =
      0.25 * constants.c0 * std::sqrt(static_cast<double>(model.steps()));
  if (!std::isfinite(lambda) || lambda < 0.0 ||
      lambda > limit * (1.0 + 1e-12)) {
    throw TiltRangeError("tilt parameter outside the certified range [0, " +
                         std::to_string(limit) + "]");
  }
}

double drift(const Model& model, double history_x, double lambda) {
  TiltConfig config{lambda, model.constants()};
  config.validate(model);
  return model.conditional_drift(history_x, lambda);
}

double drift_sum(const Model& model, double lambda,
                 std::span<const double> history) {
  const auto n = static_cast<std::size_t>(model.steps());
  if (history.size() != n + 1) {
    throw InvalidInputError("history must hold the n + 1 partial sums");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc.add(model.conditional_drift(history[i], lambda));
  }
  return acc.value();
}

double cumulant_sum(const Model& model, double lambda,
                    std::span<const double> history) {
  const auto n = static_cast<std::size_t>(model.steps());
  if (history.size() != n + 1) {
    throw InvalidInputError("history must hold the n + 1 partial sums");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc.add(model.conditional_log_mgf(history[i], lambda));
  }
  return acc.value();
}

TiltedPath simulate_tilted(const Model& model, const TiltConfig& config,
                           RngStream& rng) {
  config.validate(model);
  const long n = model.steps();
  TiltedPath out;
  out.path.increments.resize(static_cast<std::size_t>(n));
  out.path.partial_sums.resize(static_cast<std::size_t>(n) + 1);
  out.path.partial_sums[0] = 0.0;
  const TiltedStepper stepper(model, config.lambda);
  std::size_t i = 0;
  const TiltedSummary summary = detail::run_tilted_steps(
      stepper, config.lambda, n, rng, [&](double xi, double x_after) {
        out.path.increments[i] = xi;
        out.path.partial_sums[i + 1] = x_after;
        ++i;
      });
  out.path.log_mgf_sum = summary.log_mgf_sum;
  out.log_weight = summary.log_weight;
  out.drift_sum = summary.drift_sum;
  out.residual = summary.final_x - summary.drift_sum;
  return out;
}

TiltedSummary simulate_tilted_summary(const Model& model,
                                      const TiltConfig& config,
                                      RngStream& rng) {
  config.validate(model);
  const TiltedStepper stepper(model, config.lambda);
  return detail::run_tilted_steps(stepper, config.lambda, model.steps(), rng,
                                  [](double, double) {});
}

std::string to_string(LambdaMode mode) {
  return mode == LambdaMode::kProxy ? "proxy" : "root_find";
}

LambdaMode lambda_mode_from_string(const std::string& text) {
  if (text == "proxy") return LambdaMode::kProxy;
  if (text == "root_find") return LambdaMode::kRootFind;
  throw InvalidInputError("unknown lambda mode: " + text);
}

double solve_lambda(const Model& model, double x,
                    const ConditionConstants& constants, LambdaMode mode) {
  if (!std::isfinite(x) || x < 0.0) {
    throw InvalidInputError("threshold must be finite and non-negative");
  }
  constants.validate();
  const double sqrt_n = std::sqrt(static_cast<double>(model.steps()));
  const double proxy = std::min(x, constants.alpha0 * sqrt_n);
  if (mode == LambdaMode::kProxy) return proxy;
  if (!model.iid()) {
    throw UnsupportedModeError(
        "root finding needs a history-independent drift; use the proxy mode");
  }
  const long n = model.steps();
  auto total_drift = [&](double lambda) {
    return static_cast<double>(n) * model.conditional_drift(0.0, lambda) - x;
  };
  const double hi_limit = 0.25 * constants.c0 * sqrt_n;
  if (total_drift(hi_limit) < 0.0) return proxy;
  double lo = 0.0;
  double hi = hi_limit;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = total_drift(mid);
    if (std::fabs(f) <= 1e-10) return mid;
    if (f < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> decompose(const TiltedPath& tilted) {
  return {tilted.drift_sum, tilted.residual};
}

}  // namespace mtilt
