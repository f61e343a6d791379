#pragma once

#include <span>
#include <string>
#include <utility>

#include "mtilt/conditions.hpp"
#include "mtilt/model.hpp"
#include "mtilt/path.hpp"
#include "mtilt/rng.hpp"
#include "mtilt/summation.hpp"

namespace mtilt {

// Tilt parameter plus the constants certifying it. The drift and cumulant
// approximations are certified on 0 <= lambda <= c0 sqrt(n) / 4, so that is
// the range validate() enforces for estimation runs.
struct TiltConfig {
  double lambda = 0.0;
  ConditionConstants constants;

  void validate(const Model& model) const;
};

struct TiltedPath {
  Path path;
  double log_weight = 0.0;  // log of dP/dP_tilted along the path
  double drift_sum = 0.0;   // accumulated conditional drifts
  double residual = 0.0;    // X_n minus the drift sum
};

// Endpoint totals of one tilted trajectory, without storing the trajectory.
struct TiltedSummary {
  double final_x = 0.0;
  double log_weight = 0.0;
  double drift_sum = 0.0;
  double log_mgf_sum = 0.0;
};

// Conditional drift under the tilt, restricted to the certified range.
double drift(const Model& model, double history_x, double lambda);

// Sum of conditional drifts along a full history of partial sums X_0..X_n
// (history.size() == n + 1; the final entry closes the path and contributes
// nothing).
double drift_sum(const Model& model, double lambda,
                 std::span<const double> history);

// Sum of conditional log moment generating functions along such a history.
double cumulant_sum(const Model& model, double lambda,
                    std::span<const double> history);

TiltedPath simulate_tilted(const Model& model, const TiltConfig& config,
                           RngStream& rng);
TiltedSummary simulate_tilted_summary(const Model& model,
                                      const TiltConfig& config,
                                      RngStream& rng);

enum class LambdaMode { kProxy, kRootFind };

std::string to_string(LambdaMode mode);
LambdaMode lambda_mode_from_string(const std::string& text);

// Tilt parameter targeting threshold x: either the proxy rule
// min(x, alpha0 sqrt(n)), or a bisection solve of total drift = x for iid
// models. Root finding falls back to the proxy when x exceeds the drift
// attainable on the certified range, and rejects history-dependent models.
double solve_lambda(const Model& model, double x,
                    const ConditionConstants& constants, LambdaMode mode);

// Splits the tilted endpoint into (drift part, centered part); the two add
// back to X_n up to one rounding.
std::pair<double, double> decompose(const TiltedPath& tilted);

namespace detail {

// Shared trajectory loop: per_step(increment, partial_sum_after) observes the
// path. Both full and summary simulation run exactly this arithmetic, so
// their outputs agree bit for bit on the same stream.
template <typename F>
TiltedSummary run_tilted_steps(const TiltedStepper& stepper, double lambda,
                               long n, RngStream& rng, F&& per_step) {
  CompensatedSum x;
  CompensatedSum drifts;
  CompensatedSum log_mgfs;
  for (long i = 0; i < n; ++i) {
    const int state = stepper.state(x.value());
    const double xi = stepper.sample(state, rng);
    drifts.add(stepper.drift(state));
    log_mgfs.add(stepper.log_mgf(state));
    x.add(xi);
    per_step(xi, x.value());
  }
  TiltedSummary out;
  out.final_x = x.value();
  out.drift_sum = drifts.value();
  out.log_mgf_sum = log_mgfs.value();
  out.log_weight = -lambda * out.final_x + out.log_mgf_sum;
  return out;
}

}  // namespace detail

}  // namespace mtilt
