#pragma once

#include <string>
#include <vector>

namespace mtilt {

class Model;

// Constants under which a martingale model certifies its conditional
// exponential-moment and variance conditions, plus the range parameters used
// by the tail envelope.
struct ConditionConstants {
  long n = 1;
  double c0 = 1.0;
  double c1 = 1.0;
  double delta = 0.0;
  double alpha0 = 1.0;
  double c_alpha0 = 1.0;

  void validate() const;  // throws InvalidInputError
};

enum class ConditionName {
  kA1,
  kA2,
  kA1Prime,
  kBernstein,
  kLemma31,
};

std::string to_string(ConditionName name);

// One sub-comparison inside a check: a moment order or a history state.
struct ConditionDetail {
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
};

// Relative slack applied when comparing measured against bound, so checks that
// hold with equality in exact arithmetic are not failed over rounding.
inline constexpr double kConditionTolerance = 1e-9;

struct ConditionReport {
  ConditionName condition;
  double measured = 0.0;  // worst case over histories (and orders, if any)
  double bound = 0.0;
  bool holds = false;
  std::vector<ConditionDetail> detail;
};

// Conditional exponential moment condition: for every step and history,
// E(exp(c0 sqrt(n) |xi|) | F) <= c1. measured is the supremum over the model's
// extremal history states.
ConditionReport check_a1(const Model& model, double c0, double c1);

// Quadratic characteristic pinned to 1: sup over histories of |<X>_n - 1|
// must stay within delta^2. The supremum uses the per-step conditional
// variance ranges the model declares, which dominate every realized path.
ConditionReport check_a2(const Model& model, double delta);

// Factorial moment growth: E(|xi|^k | F) <= c1 k! epsilon^k for k = 2..k_max.
// measured is the worst ratio against c1 = 1 scaling; detail rows carry each
// order. Requires k_max >= 2.
ConditionReport check_a1_prime(const Model& model, double epsilon, double c1,
                               int k_max = 12);

// Conditional Bernstein condition with constant C:
// |E(xi^k | F)| <= (k!/2) (C/sqrt(n))^(k-2) E(xi^2 | F) for k >= 2. Zero
// conditional variance passes only when every higher moment vanishes too.
ConditionReport check_bernstein(const Model& model, double bernstein_c,
                                int k_max = 12);

// Consequence of the exponential moment condition: for k >= 3,
// E(|xi|^k | F) <= k! (c0 sqrt(n))^{-k} c1. measured is the worst
// measured/bound ratio over k = 3..k_max; detail rows carry each order.
ConditionReport moment_bound_check(const Model& model, double c0, double c1,
                                   int k_max = 12);

}  // namespace mtilt
