#include "mtilt/model.hpp"

#include <cmath>

#include "mtilt/errors.hpp"
#include "mtilt/normal.hpp"

namespace mtilt {
namespace {

constexpr double kLn2 = 0.6931471805599453;

// Sign of sin(pi t) with integers mapping to exactly zero. fmod is exact, so
// histories that live on the +-1/sqrt(n) lattice (everything reachable from
// X_0 = 0 while the step scale stays 1) never pick up rounding noise here.
int lattice_sign(double t) {
  const double r = std::fmod(t, 2.0);
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0;
  if (r > 0.0) return r < 1.0 ? 1 : -1;
  return r > -1.0 ? -1 : 1;
}

double log_cosh(double u) {
  const double a = std::fabs(u);
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

// P(W in [-T, T]) for W ~ N(shift, 1), via tail differences to avoid
// cancellation for shifted arguments.
double truncated_mass(double cutoff, double shift) {
  return normal_tail(shift - cutoff) - normal_tail(shift + cutoff);
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRademacher:
      return "rademacher";
    case ModelKind::kHeteroscedastic:
      return "heteroscedastic";
    case ModelKind::kTruncatedGaussian:
      return "truncated_gaussian";
    case ModelKind::kBernsteinMixture:
      return "bernstein_mixture";
  }
  return "unknown";
}

Model::Model(ModelKind kind, long n) : kind_(kind), n_(n) {
  if (n < 1) throw InvalidInputError("model needs at least one step");
  sqrt_n_ = std::sqrt(static_cast<double>(n));
}

Model Model::rademacher(long n) {
  Model m(ModelKind::kRademacher, n);
  m.constants_ = {n, 4.0, std::exp(4.0), 0.0, 1.0, 1.0};
  return m;
}

Model Model::heteroscedastic(long n, double amplitude) {
  if (!(std::fabs(amplitude) < 1.0)) {
    throw InvalidInputError("heteroscedastic amplitude must satisfy |a| < 1");
  }
  Model m(ModelKind::kHeteroscedastic, n);
  m.amplitude_ = amplitude;
  const double a = std::fabs(amplitude);
  m.constants_ = {n, 4.0, std::exp(4.0 * std::sqrt(1.0 + a)), std::sqrt(a),
                  1.0, 1.0};
  return m;
}

Model Model::truncated_gaussian(long n, double cutoff) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw InvalidInputError("truncation cutoff must be positive");
  }
  Model m(ModelKind::kTruncatedGaussian, n);
  m.cutoff_ = cutoff;
  m.tg_mass_ = truncated_mass(cutoff, 0.0);
  m.tg_sd_ = std::sqrt(1.0 - 2.0 * cutoff * normal_pdf(cutoff) / m.tg_mass_);
  const double c0 = 1.0 / (2.0 * cutoff);
  const double measured = m.conditional_exp_abs(0.0, c0 * m.sqrt_n_);
  m.constants_ = {n, c0, 1.01 * measured, 0.0, 1.0, 1.0};
  return m;
}

Model Model::bernstein_mixture(long n, double spike) {
  return bernstein_mixture(n, spike, 1.0 / (spike * spike));
}

Model Model::bernstein_mixture(long n, double spike, double weight) {
  if (!(spike >= 1.0) || !std::isfinite(spike)) {
    throw InvalidInputError("mixture spike must be at least 1");
  }
  if (!(weight > 0.0) || !(weight <= 1.0)) {
    throw InvalidInputError("mixture weight must lie in (0, 1]");
  }
  Model m(ModelKind::kBernsteinMixture, n);
  m.spike_ = spike;
  m.weight_ = weight;
  const double var_dev = std::fabs(weight * (spike * spike) - 1.0);
  m.constants_ = {n, 1.0, 1.01 * (1.0 - weight + weight * std::exp(spike)),
                  std::sqrt(var_dev), 1.0, 1.0};
  return m;
}

std::string Model::name() const { return to_string(kind_); }

double Model::max_abs_increment() const {
  switch (kind_) {
    case ModelKind::kRademacher:
      return 1.0 / sqrt_n_;
    case ModelKind::kHeteroscedastic:
      return std::sqrt(1.0 + std::fabs(amplitude_)) / sqrt_n_;
    case ModelKind::kTruncatedGaussian:
      return cutoff_ / (tg_sd_ * sqrt_n_);
    case ModelKind::kBernsteinMixture:
      return spike_ / sqrt_n_;
  }
  return 0.0;
}

Model Model::mirrored() const {
  if (kind_ == ModelKind::kHeteroscedastic) {
    return heteroscedastic(n_, -amplitude_);
  }
  return *this;
}

double Model::step_scale(double history_x) const {
  if (kind_ == ModelKind::kHeteroscedastic) {
    return std::sqrt(1.0 + amplitude_ * lattice_sign(history_x * sqrt_n_));
  }
  return 1.0;
}

void Model::check_lambda(double lambda) const {
  if (!std::isfinite(lambda) ||
      std::fabs(lambda) > constants_.c0 * sqrt_n_ * (1.0 + 1e-12)) {
    throw TiltRangeError("tilt parameter outside the certified range");
  }
}

double Model::conditional_mgf(double history_x, double lambda) const {
  check_lambda(lambda);
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic: {
      const double step = step_scale(history_x) / sqrt_n_;
      return std::cosh(lambda * step);
    }
    case ModelKind::kTruncatedGaussian: {
      const double s = lambda / (sqrt_n_ * tg_sd_);
      return std::exp(0.5 * s * s) * truncated_mass(cutoff_, s) / tg_mass_;
    }
    case ModelKind::kBernsteinMixture: {
      const double step = spike_ / sqrt_n_;
      const double sh = std::sinh(0.5 * (lambda * step));
      return 1.0 + 2.0 * weight_ * sh * sh;
    }
  }
  return 1.0;
}

double Model::conditional_log_mgf(double history_x, double lambda) const {
  check_lambda(lambda);
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic: {
      const double step = step_scale(history_x) / sqrt_n_;
      return log_cosh(lambda * step);
    }
    case ModelKind::kTruncatedGaussian: {
      const double s = lambda / (sqrt_n_ * tg_sd_);
      return 0.5 * s * s +
             std::log(truncated_mass(cutoff_, s) / tg_mass_);
    }
    case ModelKind::kBernsteinMixture: {
      const double step = spike_ / sqrt_n_;
      const double sh = std::sinh(0.5 * (lambda * step));
      return std::log1p(2.0 * weight_ * sh * sh);
    }
  }
  return 0.0;
}

double Model::conditional_moment(double history_x, int k, bool absolute) const {
  if (k < 1) throw InvalidInputError("moment order must be at least 1");
  if (!absolute && k % 2 == 1) return 0.0;  // every family is symmetric
  if (k == 2) return conditional_variance(history_x);
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic:
      return std::pow(step_scale(history_x) / sqrt_n_, k);
    case ModelKind::kBernsteinMixture:
      return weight_ * std::pow(spike_ / sqrt_n_, k);
    case ModelKind::kTruncatedGaussian: {
      // E|W|^k on [-T, T] by the integration-by-parts recursion
      // I_k = (k-1) I_{k-2} - T^{k-1} phi(T), run in extended precision.
      const long double T = cutoff_;
      const long double phi_t = normal_pdf(cutoff_);
      long double i_prev = 0.5L * tg_mass_;                   // I_0
      long double i_cur = normal_pdf(0.0) - phi_t;            // I_1
      long double t_pow = T;                                  // T^1
      if (k == 1) {
        const long double m = 2.0L * i_cur / tg_mass_;
        return static_cast<double>(m) / (tg_sd_ * sqrt_n_);
      }
      for (int j = 2; j <= k; ++j) {
        const long double next = (j - 1) * i_prev - t_pow * phi_t;
        i_prev = i_cur;
        i_cur = next;
        t_pow *= T;
      }
      const long double mk = 2.0L * i_cur / tg_mass_;
      return static_cast<double>(mk) /
             std::pow(tg_sd_ * sqrt_n_, static_cast<double>(k));
    }
  }
  return 0.0;
}

double Model::conditional_variance(double history_x) const {
  switch (kind_) {
    case ModelKind::kRademacher:
      return 1.0 / static_cast<double>(n_);
    case ModelKind::kHeteroscedastic: {
      const double s2 =
          1.0 + amplitude_ * lattice_sign(history_x * sqrt_n_);
      return s2 / static_cast<double>(n_);
    }
    case ModelKind::kTruncatedGaussian:
      return 1.0 / static_cast<double>(n_);  // standardized by construction
    case ModelKind::kBernsteinMixture:
      return weight_ * (spike_ * spike_) / static_cast<double>(n_);
  }
  return 0.0;
}

double Model::conditional_variance_deviation(double history_x) const {
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kTruncatedGaussian:
      return 0.0;
    case ModelKind::kHeteroscedastic:
      return amplitude_ * lattice_sign(history_x * sqrt_n_);
    case ModelKind::kBernsteinMixture:
      return weight_ * (spike_ * spike_) - 1.0;
  }
  return 0.0;
}

double Model::conditional_exp_abs(double history_x, double s) const {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw InvalidInputError("exponential moment argument must be >= 0");
  }
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic: {
      const double step = step_scale(history_x) / sqrt_n_;
      return std::exp(s * step);
    }
    case ModelKind::kTruncatedGaussian: {
      const double a = s / (sqrt_n_ * tg_sd_);
      return 2.0 * std::exp(0.5 * a * a) *
             (normal_tail(a - cutoff_) - normal_tail(a)) / tg_mass_;
    }
    case ModelKind::kBernsteinMixture: {
      const double step = spike_ / sqrt_n_;
      return 1.0 - weight_ + weight_ * std::exp(s * step);
    }
  }
  return 1.0;
}

double Model::conditional_drift(double history_x, double lambda) const {
  check_lambda(lambda);
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic: {
      const double step = step_scale(history_x) / sqrt_n_;
      return step * std::tanh(lambda * step);
    }
    case ModelKind::kTruncatedGaussian: {
      const double s = lambda / (sqrt_n_ * tg_sd_);
      const double mass = truncated_mass(cutoff_, s);
      const double w_mean =
          s + (normal_pdf(cutoff_ + s) - normal_pdf(cutoff_ - s)) / mass;
      return w_mean / (tg_sd_ * sqrt_n_);
    }
    case ModelKind::kBernsteinMixture: {
      const double step = spike_ / sqrt_n_;
      const double u = lambda * step;
      const double sh = std::sinh(0.5 * u);
      const double mgf = 1.0 + 2.0 * weight_ * sh * sh;
      return step * weight_ * std::sinh(u) / mgf;
    }
  }
  return 0.0;
}

double Model::conditional_sample(double history_x, RngStream& rng) const {
  return tilted_conditional_sample(history_x, 0.0, rng);
}

double Model::tilted_conditional_sample(double history_x, double lambda,
                                        RngStream& rng) const {
  check_lambda(lambda);
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic: {
      const double step = step_scale(history_x) / sqrt_n_;
      const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * lambda * step));
      return rng.next_double() < p_plus ? step : -step;
    }
    case ModelKind::kTruncatedGaussian: {
      const double s = lambda / (sqrt_n_ * tg_sd_);
      const double scale = 1.0 / (tg_sd_ * sqrt_n_);
      for (;;) {
        const double w = rng.next_normal() + s;
        if (std::fabs(w) <= cutoff_) return w * scale;
      }
    }
    case ModelKind::kBernsteinMixture: {
      const double step = spike_ / sqrt_n_;
      const double u = lambda * step;
      const double sh = std::sinh(0.5 * u);
      const double mgf = 1.0 + 2.0 * weight_ * sh * sh;
      const double p_up = 0.5 * weight_ * std::exp(u) / mgf;
      const double p_down = p_up + 0.5 * weight_ * std::exp(-u) / mgf;
      const double v = rng.next_double();
      if (v < p_up) return step;
      if (v < p_down) return -step;
      return 0.0;
    }
  }
  return 0.0;
}

std::vector<double> Model::extremal_histories() const {
  if (kind_ == ModelKind::kHeteroscedastic) {
    return {0.0, 0.5 / sqrt_n_, -0.5 / sqrt_n_};
  }
  return {0.0};
}

TiltedStepper::TiltedStepper(const Model& model, double lambda)
    : kind_(model.kind_), sqrt_n_(model.sqrt_n_) {
  model.check_lambda(lambda);
  state_count_ = kind_ == ModelKind::kHeteroscedastic ? 3 : 1;
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic: {
      for (int i = 0; i < state_count_; ++i) {
        const int sign = i - (state_count_ == 3 ? 1 : 0);
        const double s2 = 1.0 + model.amplitude_ * sign;
        const double step = std::sqrt(s2) / sqrt_n_;
        step_[i] = step;
        p_plus_[i] = 1.0 / (1.0 + std::exp(-2.0 * lambda * step));
        drift_[i] = step * std::tanh(lambda * step);
        log_mgf_[i] = log_cosh(lambda * step);
      }
      break;
    }
    case ModelKind::kTruncatedGaussian:
      cutoff_ = model.cutoff_;
      tg_shift_ = lambda / (sqrt_n_ * model.tg_sd_);
      tg_scale_ = 1.0 / (model.tg_sd_ * sqrt_n_);
      drift_[0] = model.conditional_drift(0.0, lambda);
      log_mgf_[0] = model.conditional_log_mgf(0.0, lambda);
      break;
    case ModelKind::kBernsteinMixture: {
      const double step = model.spike_ / sqrt_n_;
      const double u = lambda * step;
      const double sh = std::sinh(0.5 * u);
      const double mgf = 1.0 + 2.0 * model.weight_ * sh * sh;
      mix_p_up_ = 0.5 * model.weight_ * std::exp(u) / mgf;
      mix_p_down_ = mix_p_up_ + 0.5 * model.weight_ * std::exp(-u) / mgf;
      step_[0] = step;
      drift_[0] = model.conditional_drift(0.0, lambda);
      log_mgf_[0] = model.conditional_log_mgf(0.0, lambda);
      break;
    }
  }
}

int TiltedStepper::state(double history_x) const {
  if (kind_ != ModelKind::kHeteroscedastic) return 0;
  return lattice_sign(history_x * sqrt_n_) + 1;
}

double TiltedStepper::sample(int state, RngStream& rng) const {
  switch (kind_) {
    case ModelKind::kRademacher:
    case ModelKind::kHeteroscedastic:
      return rng.next_double() < p_plus_[state] ? step_[state] : -step_[state];
    case ModelKind::kTruncatedGaussian:
      for (;;) {
        const double w = rng.next_normal() + tg_shift_;
        if (std::fabs(w) <= cutoff_) return w * tg_scale_;
      }
    case ModelKind::kBernsteinMixture: {
      const double v = rng.next_double();
      if (v < mix_p_up_) return step_[0];
      if (v < mix_p_down_) return -step_[0];
      return 0.0;
    }
  }
  return 0.0;
}

}  // namespace mtilt
