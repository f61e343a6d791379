#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mtilt/conditions.hpp"
#include "mtilt/model.hpp"
#include "mtilt/tilting.hpp"

namespace mtilt {

enum class EstimatorKind { kNaive, kImportance, kEnumeration };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& text);

struct ExecutionPolicy {
  int workers = 0;  // 0: MTILT_WORKERS env, then hardware concurrency
};

// Probability threshold below which Estimate::underflow is raised and callers
// should read log_value instead of value.
inline constexpr double kUnderflowFloor = 1e-300;

struct Estimate {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  double std_error = 0.0;
  long replicates = 0;  // samples drawn, or paths enumerated
  std::uint64_t seed = 0;
  double lambda = 0.0;
  EstimatorKind estimator = EstimatorKind::kNaive;
  bool underflow = false;
};

// Streaming accumulator for weighted tail indicators. Weights enter as logs
// and are rescaled against the running maximum, so the mean and its standard
// error survive weights far below double range. Merging is associative-in-
// order: blocks must merge in index order for reproducibility.
class TailAccumulator {
 public:
  void add_hit(double log_weight);
  void add_miss() { ++count_; }
  void merge(const TailAccumulator& other);

  long count() const { return count_; }
  long hits() const { return hits_; }

  // Mean weight-per-replicate, its log, and the standard error of the mean.
  Estimate finalize() const;

 private:
  long count_ = 0;
  long hits_ = 0;
  double max_lw_ = -std::numeric_limits<double>::infinity();
  double sum_w_ = 0.0;   // sum of exp(lw - max_lw_)
  double sum_w2_ = 0.0;  // sum of exp(2 (lw - max_lw_))
};

// Plain Monte Carlo estimate of P(X_n > x).
Estimate naive_mc_tail(const Model& model, double x, long replicates,
                       std::uint64_t seed, const ExecutionPolicy& policy = {});

// One simulation pass evaluated against several thresholds at once; entry j
// matches naive_mc_tail(model, xs[j], ...) exactly.
std::vector<Estimate> naive_mc_tail_multi(const Model& model,
                                          std::span<const double> xs,
                                          long replicates, std::uint64_t seed,
                                          const ExecutionPolicy& policy = {});

// Importance-sampling estimate of P(X_n > x) under the tilted law described
// by config; each replicate contributes its change-of-measure weight.
Estimate is_tail(const Model& model, double x, const TiltConfig& config,
                 long replicates, std::uint64_t seed,
                 const ExecutionPolicy& policy = {});

// Exact tail by enumerating all 2^n sign paths (two-point families, n <= 24).
Estimate exact_tail_enumeration(const Model& model, double x);

// Same tail computed on the tilted tree with change-of-measure weights; used
// to cross-check the tilt against direct enumeration.
Estimate tilted_tail_enumeration(const Model& model, double x, double lambda);

struct TailSettings {
  EstimatorKind estimator = EstimatorKind::kImportance;
  // Tilt parameter for importance sampling; NaN solves one from x.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  LambdaMode lambda_mode = LambdaMode::kProxy;
  long replicates = 100000;
  std::uint64_t seed = 1;
  ExecutionPolicy policy;
};

// Dispatches on settings.estimator.
Estimate tail_estimate(const Model& model, double x,
                       const TailSettings& settings,
                       const ConditionConstants& constants);

// P(X_n < -x), computed as the upper tail of the mirrored model; exact for
// every shipped family, no symmetry assumption.
Estimate lower_tail(const Model& model, double x, const TailSettings& settings,
                    const ConditionConstants& constants);

struct EnvelopeParams {
  double x = 0.0;
  long n = 1;
  double delta = 0.0;
  double c = 1.0;
};

struct EnvelopeBounds {
  double lower = 0.0;  // always exactly 1 / upper
  double upper = 0.0;
  bool x_in_range = false;      // x <= alpha0 sqrt(n)
  bool delta_in_range = false;  // delta <= 1
};

// c * (x^3/sqrt(n) + x^2 delta^2 + (1 + x)(log(n)/sqrt(n) + delta)).
double envelope_exponent(const EnvelopeParams& params);

// Two-sided bound on the ratio P(X_n > x) / normal_tail(x).
EnvelopeBounds envelope(const EnvelopeParams& params, double alpha0);

struct RatioEstimate {
  Estimate tail;
  double normal_tail_value = 0.0;
  double ratio = 0.0;
  double std_error = 0.0;  // of the ratio
  double log_ratio = 0.0;
};

RatioEstimate tail_ratio(const Model& model, double x,
                         const TailSettings& settings,
                         const ConditionConstants& constants);

struct MdpPoint {
  double value = 0.0;  // log P(X_n > a_n x) / a_n^2
  double a_n = 0.0;
  double threshold = 0.0;
  bool no_hits = false;  // value is -inf because no replicate landed
  Estimate tail;
};

// One point of the moderate-deviation diagnostic; the limit target is
// -x^2 / 2 as a_n grows with a_n / sqrt(n) -> 0.
MdpPoint mdp_point(const Model& model, double x, double a_n,
                   const TailSettings& settings,
                   const ConditionConstants& constants);

}  // namespace mtilt
