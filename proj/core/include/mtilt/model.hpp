#pragma once

#include <string>
#include <vector>

#include "mtilt/conditions.hpp"
#include "mtilt/rng.hpp"

namespace mtilt {

enum class ModelKind {
  kRademacher,
  kHeteroscedastic,
  kTruncatedGaussian,
  kBernsteinMixture,
};

std::string to_string(ModelKind kind);

// A martingale difference model: n steps, each increment drawn from a
// conditional law that may depend on the running partial sum. Increments are
// standardized so the quadratic characteristic sits at (or within delta^2 of)
// one after n steps. Every family here is bounded, so conditional moment and
// exponential-moment formulas are closed form.
class Model {
 public:
  static Model rademacher(long n);
  // Step variance (1 + a s(X)) / n where s is the sign of sin(pi X sqrt(n)),
  // computed exactly so lattice histories give s = 0.
  static Model heteroscedastic(long n, double amplitude);
  static Model truncated_gaussian(long n, double cutoff = 3.0);
  // Increment 0 or +-spike/sqrt(n); the default weight 1/spike^2 keeps the
  // conditional variance at exactly 1/n.
  static Model bernstein_mixture(long n, double spike = 4.0);
  static Model bernstein_mixture(long n, double spike, double weight);

  ModelKind kind() const { return kind_; }
  long steps() const { return n_; }
  std::string name() const;
  const ConditionConstants& constants() const { return constants_; }

  bool iid() const { return kind_ != ModelKind::kHeteroscedastic; }
  bool two_point() const {
    return kind_ == ModelKind::kRademacher ||
           kind_ == ModelKind::kHeteroscedastic;
  }

  double amplitude() const { return amplitude_; }
  double cutoff() const { return cutoff_; }
  double spike() const { return spike_; }
  double spike_weight() const { return weight_; }
  double max_abs_increment() const;

  // Model for -X: increments negated conditional on negated histories. Exact
  // for every family (the heteroscedastic amplitude flips sign).
  Model mirrored() const;

  // Conditional quantities given the partial sum reached so far. lambda is
  // the global tilt parameter; the per-step exponent is lambda * xi. Tilt
  // arguments are accepted up to |lambda| <= c0 sqrt(n).
  double conditional_mgf(double history_x, double lambda) const;
  double conditional_log_mgf(double history_x, double lambda) const;
  // k-th conditional moment of xi; signed moments of odd order vanish for all
  // shipped families, absolute moments use closed forms.
  double conditional_moment(double history_x, int k, bool absolute) const;
  double conditional_variance(double history_x) const;
  // n E(xi^2 | history) - 1, computed without the division by n so families
  // standardized to variance 1/n report exactly zero.
  double conditional_variance_deviation(double history_x) const;
  // E(exp(s |xi|) | history) for s >= 0.
  double conditional_exp_abs(double history_x, double s) const;
  // E(xi e^{lambda xi} | .) / E(e^{lambda xi} | .).
  double conditional_drift(double history_x, double lambda) const;

  double conditional_sample(double history_x, RngStream& rng) const;
  double tilted_conditional_sample(double history_x, double lambda,
                                   RngStream& rng) const;

  // Histories attaining the extremes of the conditional law; sufficient for
  // supremum computations because every family's law depends on the history
  // only through these representative states.
  std::vector<double> extremal_histories() const;

  // Per-step scale sigma(history) for the two-point families (1 elsewhere).
  double step_scale(double history_x) const;

 private:
  Model(ModelKind kind, long n);
  void check_lambda(double lambda) const;

  ModelKind kind_;
  long n_;
  double sqrt_n_;
  double amplitude_ = 0.0;
  double cutoff_ = 0.0;
  double spike_ = 0.0;
  double weight_ = 0.0;
  double tg_mass_ = 1.0;  // 2 Phi(T) - 1
  double tg_sd_ = 1.0;    // sd of the raw truncated variable
  ConditionConstants constants_;

  friend class TiltedStepper;
};

// Per-step sampler and conditional-law table for one (model, lambda) pair.
// Precomputes everything that does not change across steps so the simulation
// loops stay branch-light; the heteroscedastic family has three conditional
// states, everything else has one.
class TiltedStepper {
 public:
  TiltedStepper(const Model& model, double lambda);

  int state_count() const { return state_count_; }
  int state(double history_x) const;
  double sample(int state, RngStream& rng) const;
  double drift(int state) const { return drift_[state]; }
  double log_mgf(int state) const { return log_mgf_[state]; }
  // Two-point families only: tilted up-move probability and step magnitude.
  double up_probability(int state) const { return p_plus_[state]; }
  double step_size(int state) const { return step_[state]; }

 private:
  ModelKind kind_;
  int state_count_;
  double cutoff_ = 0.0;
  double tg_shift_ = 0.0;
  double tg_scale_ = 0.0;
  double sqrt_n_ = 1.0;
  double p_plus_[3] = {};     // two-point families
  double step_[3] = {};       // increment magnitude per state
  double mix_p_up_ = 0.0;     // mixture cumulative probabilities
  double mix_p_down_ = 0.0;
  double drift_[3] = {};
  double log_mgf_[3] = {};
};

}  // namespace mtilt
