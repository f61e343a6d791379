#include "mtilt/estimators.hpp"

#include <cmath>

#include "mtilt/errors.hpp"
#include "mtilt/normal.hpp"
#include "mtilt/parallel.hpp"
#include "mtilt/rng.hpp"
#include "mtilt/summation.hpp"

namespace mtilt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_threshold(double x) {
  if (!std::isfinite(x)) {
    throw InvalidInputError("threshold must be finite");
  }
}

void check_replicates(long replicates) {
  if (replicates < 1) {
    throw InvalidInputError("replicate count must be at least 1");
  }
}

void check_enumerable(const Model& model) {
  if (!model.two_point()) {
    throw UnsupportedModelError(
        "exact enumeration needs a two-point conditional support");
  }
  if (model.steps() > 24) {
    throw ResourceError("exact enumeration is limited to n <= 24");
  }
}

struct MultiTailAccumulator {
  std::vector<TailAccumulator> accs;

  void ensure(std::size_t k) {
    if (accs.empty()) accs.resize(k);
  }

  void merge(const MultiTailAccumulator& other) {
    if (other.accs.empty()) return;
    if (accs.empty()) {
      accs = other.accs;
      return;
    }
    for (std::size_t j = 0; j < accs.size(); ++j) accs[j].merge(other.accs[j]);
  }
};

}  // namespace

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kNaive:
      return "naive";
    case EstimatorKind::kImportance:
      return "importance";
    case EstimatorKind::kEnumeration:
      return "enumeration";
  }
  return "unknown";
}

EstimatorKind estimator_from_string(const std::string& text) {
  if (text == "naive") return EstimatorKind::kNaive;
  if (text == "importance") return EstimatorKind::kImportance;
  if (text == "enumeration") return EstimatorKind::kEnumeration;
  throw InvalidInputError("unknown estimator: " + text);
}

void TailAccumulator::add_hit(double log_weight) {
  ++count_;
  ++hits_;
  if (log_weight > max_lw_) {
    const double s = std::exp(max_lw_ - log_weight);
    sum_w_ = sum_w_ * s + 1.0;
    sum_w2_ = sum_w2_ * (s * s) + 1.0;
    max_lw_ = log_weight;
  } else {
    const double d = std::exp(log_weight - max_lw_);
    sum_w_ += d;
    sum_w2_ += d * d;
  }
}

void TailAccumulator::merge(const TailAccumulator& other) {
  count_ += other.count_;
  hits_ += other.hits_;
  if (other.hits_ == 0) return;
  if (other.max_lw_ > max_lw_) {
    const double s = std::exp(max_lw_ - other.max_lw_);
    sum_w_ = sum_w_ * s + other.sum_w_;
    sum_w2_ = sum_w2_ * (s * s) + other.sum_w2_;
    max_lw_ = other.max_lw_;
  } else {
    const double s = std::exp(other.max_lw_ - max_lw_);
    sum_w_ += other.sum_w_ * s;
    sum_w2_ += other.sum_w2_ * (s * s);
  }
}

Estimate TailAccumulator::finalize() const {
  Estimate est;
  est.replicates = count_;
  const auto n = static_cast<double>(count_);
  if (hits_ == 0 || count_ == 0) {
    est.value = 0.0;
    est.log_value = -kInf;
    est.std_error = 0.0;
    est.underflow = false;
    return est;
  }
  const double scale = std::exp(max_lw_);
  est.value = scale * (sum_w_ / n);
  est.log_value = max_lw_ + std::log(sum_w_) - std::log(n);
  if (count_ < 2) {
    est.std_error = kInf;
  } else {
    const double centered = std::max(0.0, sum_w2_ - sum_w_ * sum_w_ / n);
    est.std_error = scale * std::sqrt(centered / (n - 1.0) / n);
  }
  est.underflow = est.value < kUnderflowFloor;
  return est;
}

Estimate naive_mc_tail(const Model& model, double x, long replicates,
                       std::uint64_t seed, const ExecutionPolicy& policy) {
  const std::vector<double> xs = {x};
  return naive_mc_tail_multi(model, xs, replicates, seed, policy)[0];
}

std::vector<Estimate> naive_mc_tail_multi(const Model& model,
                                          std::span<const double> xs,
                                          long replicates, std::uint64_t seed,
                                          const ExecutionPolicy& policy) {
  if (xs.empty()) throw InvalidInputError("need at least one threshold");
  for (double x : xs) check_threshold(x);
  check_replicates(replicates);
  const TiltedStepper stepper(model, 0.0);
  const long n = model.steps();
  const std::size_t k = xs.size();
  const auto total = parallel_reduce_replicates<MultiTailAccumulator>(
      replicates, policy.workers,
      [&](MultiTailAccumulator& acc, long i) {
        acc.ensure(k);
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        CompensatedSum x_run;
        for (long s = 0; s < n; ++s) {
          const int state = stepper.state(x_run.value());
          x_run.add(stepper.sample(state, rng));
        }
        const double final_x = x_run.value();
        for (std::size_t j = 0; j < k; ++j) {
          if (final_x > xs[j]) {
            acc.accs[j].add_hit(0.0);
          } else {
            acc.accs[j].add_miss();
          }
        }
      });
  std::vector<Estimate> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    Estimate est = total.accs[j].finalize();
    // Binomial plug-in error for the unweighted counter; the weighted
    // sample-variance path is reserved for the importance estimator.
    est.std_error =
        std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(replicates));
    est.seed = seed;
    est.lambda = 0.0;
    est.estimator = EstimatorKind::kNaive;
    out.push_back(est);
  }
  return out;
}

Estimate is_tail(const Model& model, double x, const TiltConfig& config,
                 long replicates, std::uint64_t seed,
                 const ExecutionPolicy& policy) {
  check_threshold(x);
  check_replicates(replicates);
  config.validate(model);
  const double lambda = config.lambda;
  const TiltedStepper stepper(model, lambda);
  const long n = model.steps();
  const bool homogeneous = stepper.state_count() == 1;
  const double flat_log_mgf_sum =
      homogeneous ? static_cast<double>(n) * stepper.log_mgf(0) : 0.0;
  const auto total = parallel_reduce_replicates<TailAccumulator>(
      replicates, policy.workers, [&](TailAccumulator& acc, long i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        CompensatedSum x_run;
        if (homogeneous) {
          for (long s = 0; s < n; ++s) {
            x_run.add(stepper.sample(0, rng));
          }
          const double final_x = x_run.value();
          if (final_x > x) {
            acc.add_hit(-lambda * final_x + flat_log_mgf_sum);
          } else {
            acc.add_miss();
          }
        } else {
          CompensatedSum log_mgfs;
          for (long s = 0; s < n; ++s) {
            const int state = stepper.state(x_run.value());
            log_mgfs.add(stepper.log_mgf(state));
            x_run.add(stepper.sample(state, rng));
          }
          const double final_x = x_run.value();
          if (final_x > x) {
            acc.add_hit(-lambda * final_x + log_mgfs.value());
          } else {
            acc.add_miss();
          }
        }
      });
  Estimate est = total.finalize();
  est.seed = seed;
  est.lambda = lambda;
  est.estimator = EstimatorKind::kImportance;
  return est;
}

Estimate exact_tail_enumeration(const Model& model, double x) {
  check_threshold(x);
  check_enumerable(model);
  const TiltedStepper stepper(model, 0.0);
  const long n = model.steps();
  unsigned long long hits = 0;
  // Depth-first over the sign tree; compensated partial sums keep lattice
  // histories exact so the step scale never sees rounding noise.
  auto walk = [&](auto&& self, long depth, CompensatedSum x_run) -> void {
    if (depth == n) {
      if (x_run.value() > x) ++hits;
      return;
    }
    const int state = stepper.state(x_run.value());
    const double step = stepper.step_size(state);
    CompensatedSum up = x_run;
    up.add(step);
    self(self, depth + 1, up);
    CompensatedSum down = x_run;
    down.add(-step);
    self(self, depth + 1, down);
  };
  walk(walk, 0, CompensatedSum());
  Estimate est;
  est.value = std::ldexp(static_cast<double>(hits), static_cast<int>(-n));
  est.log_value = hits == 0 ? -kInf : std::log(est.value);
  est.std_error = 0.0;
  est.replicates = 1L << n;
  est.seed = 0;
  est.lambda = 0.0;
  est.estimator = EstimatorKind::kEnumeration;
  est.underflow = hits != 0 && est.value < kUnderflowFloor;
  return est;
}

Estimate tilted_tail_enumeration(const Model& model, double x, double lambda) {
  check_threshold(x);
  check_enumerable(model);
  TiltConfig config{lambda, model.constants()};
  config.validate(model);
  const TiltedStepper stepper(model, lambda);
  const long n = model.steps();
  CompensatedSum total;
  unsigned long long hits = 0;
  auto walk = [&](auto&& self, long depth, CompensatedSum x_run, double prob,
                  double lw) -> void {
    if (depth == n) {
      if (x_run.value() > x) {
        total.add(prob * std::exp(lw));
        ++hits;
      }
      return;
    }
    const int state = stepper.state(x_run.value());
    const double step = stepper.step_size(state);
    const double p_up = stepper.up_probability(state);
    const double log_mgf = stepper.log_mgf(state);
    CompensatedSum up = x_run;
    up.add(step);
    self(self, depth + 1, up, prob * p_up, lw - lambda * step + log_mgf);
    CompensatedSum down = x_run;
    down.add(-step);
    self(self, depth + 1, down, prob * (1.0 - p_up),
         lw + lambda * step + log_mgf);
  };
  walk(walk, 0, CompensatedSum(), 1.0, 0.0);
  Estimate est;
  est.value = total.value();
  est.log_value = hits == 0 ? -kInf : std::log(est.value);
  est.std_error = 0.0;
  est.replicates = 1L << n;
  est.seed = 0;
  est.lambda = lambda;
  est.estimator = EstimatorKind::kEnumeration;
  est.underflow = hits != 0 && est.value < kUnderflowFloor;
  return est;
}

Estimate tail_estimate(const Model& model, double x,
                       const TailSettings& settings,
                       const ConditionConstants& constants) {
  switch (settings.estimator) {
    case EstimatorKind::kNaive:
      return naive_mc_tail(model, x, settings.replicates, settings.seed,
                           settings.policy);
    case EstimatorKind::kImportance: {
      const double lambda =
          std::isnan(settings.lambda)
              ? solve_lambda(model, x, constants, settings.lambda_mode)
              : settings.lambda;
      TiltConfig config{lambda, constants};
      return is_tail(model, x, config, settings.replicates, settings.seed,
                     settings.policy);
    }
    case EstimatorKind::kEnumeration:
      if (std::isnan(settings.lambda) || settings.lambda == 0.0) {
        return exact_tail_enumeration(model, x);
      }
      return tilted_tail_enumeration(model, x, settings.lambda);
  }
  throw InvalidInputError("unknown estimator kind");
}

Estimate lower_tail(const Model& model, double x, const TailSettings& settings,
                    const ConditionConstants& constants) {
  const Model mirror = model.mirrored();
  return tail_estimate(mirror, x, settings, constants);
}

double envelope_exponent(const EnvelopeParams& params) {
  if (params.n < 1) throw InvalidInputError("envelope needs n >= 1");
  if (!std::isfinite(params.x) || params.x < 0.0) {
    throw InvalidInputError("envelope threshold must be non-negative");
  }
  if (!(params.delta >= 0.0) || !std::isfinite(params.delta)) {
    throw InvalidInputError("envelope delta must be non-negative");
  }
  if (!(params.c > 0.0) || !std::isfinite(params.c)) {
    throw InvalidInputError("envelope constant must be positive");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(params.n));
  const double log_n = std::log(static_cast<double>(params.n));
  const double x = params.x;
  const double shape = x * x * x / sqrt_n +
                       x * x * (params.delta * params.delta) +
                       (1.0 + x) * (log_n / sqrt_n + params.delta);
  return params.c * shape;
}

EnvelopeBounds envelope(const EnvelopeParams& params, double alpha0) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw InvalidInputError("alpha0 must be positive");
  }
  const double exponent = envelope_exponent(params);
  EnvelopeBounds bounds;
  bounds.upper = std::exp(exponent);
  bounds.lower = 1.0 / bounds.upper;
  bounds.x_in_range =
      params.x <= alpha0 * std::sqrt(static_cast<double>(params.n));
  bounds.delta_in_range = params.delta <= alpha0;
  return bounds;
}

RatioEstimate tail_ratio(const Model& model, double x,
                         const TailSettings& settings,
                         const ConditionConstants& constants) {
  RatioEstimate out;
  out.normal_tail_value = normal_tail(x);
  if (out.normal_tail_value < kUnderflowFloor) {
    throw PrecisionError("reference tail underflows at this threshold");
  }
  out.tail = tail_estimate(model, x, settings, constants);
  out.ratio = out.tail.value / out.normal_tail_value;
  out.std_error = out.tail.std_error / out.normal_tail_value;
  out.log_ratio = out.tail.log_value - log_normal_tail(x);
  return out;
}

MdpPoint mdp_point(const Model& model, double x, double a_n,
                   const TailSettings& settings,
                   const ConditionConstants& constants) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw InvalidInputError("deviation scale x must be positive");
  }
  if (!std::isfinite(a_n) || a_n < 1.0) {
    throw InvalidInputError("speed a_n must be at least 1");
  }
  MdpPoint point;
  point.a_n = a_n;
  point.threshold = a_n * x;
  TailSettings local = settings;
  if (local.estimator == EstimatorKind::kImportance &&
      std::isnan(local.lambda)) {
    local.lambda =
        solve_lambda(model, point.threshold, constants, local.lambda_mode);
  }
  point.tail = tail_estimate(model, point.threshold, local, constants);
  point.value = point.tail.log_value / (a_n * a_n);
  point.no_hits = point.tail.log_value == -kInf;
  return point;
}

}  // namespace mtilt
