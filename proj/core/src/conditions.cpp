#include "mtilt/conditions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mtilt/errors.hpp"
#include "mtilt/model.hpp"

namespace mtilt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string history_label(double history_x) {
  std::ostringstream os;
  os << "history=" << history_x;
  return os.str();
}

std::string order_label(int k) { return "k=" + std::to_string(k); }

bool within(double measured, double bound) {
  return measured <= bound * (1.0 + kConditionTolerance);
}

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

}  // namespace

void ConditionConstants::validate() const {
  if (n < 1) throw InvalidInputError("constants: n must be at least 1");
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw InvalidInputError("constants: c0 must be positive and finite");
  }
  if (!(c1 >= 1.0) || !std::isfinite(c1)) {
    throw InvalidInputError("constants: c1 must be at least 1 and finite");
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidInputError("constants: delta must be non-negative");
  }
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw InvalidInputError("constants: alpha0 must be positive");
  }
  if (!(c_alpha0 > 0.0) || !std::isfinite(c_alpha0)) {
    throw InvalidInputError("constants: c_alpha0 must be positive");
  }
}

std::string to_string(ConditionName name) {
  switch (name) {
    case ConditionName::kA1:
      return "A1";
    case ConditionName::kA2:
      return "A2";
    case ConditionName::kA1Prime:
      return "A1prime";
    case ConditionName::kBernstein:
      return "Bernstein";
    case ConditionName::kLemma31:
      return "Lemma31";
  }
  return "unknown";
}

ConditionReport check_a1(const Model& model, double c0, double c1) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw InvalidInputError("A1 check: c0 must be positive and finite");
  }
  if (!std::isfinite(c1)) {
    throw InvalidInputError("A1 check: c1 must be finite");
  }
  ConditionReport report;
  report.condition = ConditionName::kA1;
  report.bound = c1;
  const double arg = c0 * std::sqrt(static_cast<double>(model.steps()));
  double worst = -kInf;
  for (double h : model.extremal_histories()) {
    const double m = model.conditional_exp_abs(h, arg);
    report.detail.push_back({history_label(h), m, c1});
    worst = std::max(worst, m);
  }
  report.measured = worst;
  report.holds = within(report.measured, report.bound);
  return report;
}

ConditionReport check_a2(const Model& model, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw InvalidInputError("A2 check: delta must be non-negative");
  }
  ConditionReport report;
  report.condition = ConditionName::kA2;
  report.bound = delta * delta;
  double worst = 0.0;
  for (double h : model.extremal_histories()) {
    const double dev = std::fabs(model.conditional_variance_deviation(h));
    report.detail.push_back({history_label(h), dev, report.bound});
    worst = std::max(worst, dev);
  }
  report.measured = worst;
  report.holds = within(report.measured, report.bound);
  return report;
}

ConditionReport check_a1_prime(const Model& model, double epsilon, double c1,
                               int k_max) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInputError("factorial-growth check: epsilon must be positive");
  }
  if (!std::isfinite(c1)) {
    throw InvalidInputError("factorial-growth check: c1 must be finite");
  }
  if (k_max < 2) {
    throw InvalidInputError("factorial-growth check: k_max must be >= 2");
  }
  ConditionReport report;
  report.condition = ConditionName::kA1Prime;
  report.bound = c1;
  double worst = -kInf;
  for (int k = 2; k <= k_max; ++k) {
    const double scale = factorial(k) * std::pow(epsilon, k);
    double m_k = -kInf;
    for (double h : model.extremal_histories()) {
      m_k = std::max(m_k, model.conditional_moment(h, k, true));
    }
    const double ratio = m_k / scale;
    report.detail.push_back({order_label(k), ratio, c1});
    worst = std::max(worst, ratio);
  }
  report.measured = worst;
  report.holds = within(report.measured, report.bound);
  return report;
}

ConditionReport check_bernstein(const Model& model, double bernstein_c,
                                int k_max) {
  if (!(bernstein_c > 0.0) || !std::isfinite(bernstein_c)) {
    throw InvalidInputError("Bernstein check: constant must be positive");
  }
  if (k_max < 2) {
    throw InvalidInputError("Bernstein check: k_max must be >= 2");
  }
  ConditionReport report;
  report.condition = ConditionName::kBernstein;
  report.bound = 1.0;
  const double sqrt_n = std::sqrt(static_cast<double>(model.steps()));
  double worst = -kInf;
  for (int k = 2; k <= k_max; ++k) {
    double ratio_k = -kInf;
    for (double h : model.extremal_histories()) {
      const double num = std::fabs(model.conditional_moment(h, k, false));
      const double var = model.conditional_variance(h);
      const double den = 0.5 * factorial(k) *
                         std::pow(bernstein_c / sqrt_n, k - 2) * var;
      double ratio;
      if (den > 0.0) {
        ratio = num / den;
      } else {
        ratio = num == 0.0 ? 0.0 : kInf;
      }
      ratio_k = std::max(ratio_k, ratio);
    }
    report.detail.push_back({order_label(k), ratio_k, 1.0});
    worst = std::max(worst, ratio_k);
  }
  report.measured = worst;
  report.holds = within(report.measured, report.bound);
  return report;
}

ConditionReport moment_bound_check(const Model& model, double c0, double c1,
                                   int k_max) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw InvalidInputError("moment-bound check: c0 must be positive");
  }
  if (!std::isfinite(c1)) {
    throw InvalidInputError("moment-bound check: c1 must be finite");
  }
  if (k_max < 3) {
    throw InvalidInputError("moment-bound check: k_max must be >= 3");
  }
  if (!check_a1(model, c0, c1).holds) {
    throw InvalidInputError(
        "moment-bound check needs the exponential moment condition "
        "to hold at the supplied (c0, c1)");
  }
  ConditionReport report;
  report.condition = ConditionName::kLemma31;
  report.bound = 1.0;
  const double base = c0 * std::sqrt(static_cast<double>(model.steps()));
  double worst = -kInf;
  for (int k = 3; k <= k_max; ++k) {
    double m_k = -kInf;
    for (double h : model.extremal_histories()) {
      m_k = std::max(m_k, model.conditional_moment(h, k, true));
    }
    const double bound_k = factorial(k) * std::pow(base, -k) * c1;
    report.detail.push_back({order_label(k), m_k, bound_k});
    worst = std::max(worst, m_k / bound_k);
  }
  report.measured = worst;
  report.holds = within(report.measured, report.bound);
  return report;
}

}  // namespace mtilt
