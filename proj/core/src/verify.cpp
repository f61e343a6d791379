#include "mtilt/verify.hpp"

#include <algorithm>
#include <cmath>

#include "mtilt/errors.hpp"
#include "mtilt/normal.hpp"
#include "mtilt/parallel.hpp"
#include "mtilt/rng.hpp"
#include "mtilt/summation.hpp"
#include "mtilt/tilting.hpp"

namespace mtilt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPassTolerance = 1e-9;

double tilt_limit(const Model& model) {
  return 0.25 * model.constants().c0 *
         std::sqrt(static_cast<double>(model.steps()));
}

// Supremum over histories of |total(lambda) - target| where total accumulates
// stepper per-state values (drift or log mgf) along the history. Constant
// extremal states always enter; path-dependent families additionally sweep
// realized histories, exhaustively for n <= 12 and by simulation otherwise.
template <typename StateValue>
double sup_accumulated_deviation(const Model& model, double lambda,
                                 double target, long sampled_histories,
                                 std::uint64_t seed, StateValue&& state_value) {
  const TiltedStepper tilted(model, lambda);
  const long n = model.steps();
  double worst = 0.0;
  for (double h : model.extremal_histories()) {
    const int state = tilted.state(h);
    CompensatedSum acc;
    for (long i = 0; i < n; ++i) acc.add(state_value(tilted, state));
    worst = std::max(worst, std::fabs(acc.value() - target));
  }
  if (model.iid()) return worst;
  const TiltedStepper base(model, 0.0);
  if (n <= 12) {
    auto walk = [&](auto&& self, long depth, CompensatedSum x_run,
                    CompensatedSum acc) -> void {
      if (depth == n) {
        worst = std::max(worst, std::fabs(acc.value() - target));
        return;
      }
      const int state = base.state(x_run.value());
      CompensatedSum next_acc = acc;
      next_acc.add(state_value(tilted, state));
      const double step = base.step_size(state);
      CompensatedSum up = x_run;
      up.add(step);
      self(self, depth + 1, up, next_acc);
      CompensatedSum down = x_run;
      down.add(-step);
      self(self, depth + 1, down, next_acc);
    };
    walk(walk, 0, CompensatedSum(), CompensatedSum());
    return worst;
  }
  for (long r = 0; r < sampled_histories; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    CompensatedSum x_run;
    CompensatedSum acc;
    for (long i = 0; i < n; ++i) {
      const int state = base.state(x_run.value());
      acc.add(state_value(tilted, state));
      x_run.add(base.sample(state, rng));
    }
    worst = std::max(worst, std::fabs(acc.value() - target));
  }
  return worst;
}

BoundTable bound_sweep(const ModelFamily& family,
                       std::span<const std::pair<long, double>> points,
                       long sampled_histories, std::uint64_t seed,
                       double c_max, bool quadratic) {
  if (sampled_histories < 1) {
    throw InvalidInputError("need at least one sampled history");
  }
  if (!(c_max > 0.0) || !std::isfinite(c_max)) {
    throw InvalidInputError("c_max must be positive");
  }
  BoundTable table;
  table.c_max = c_max;
  long index = 0;
  for (const auto& [n, lambda] : points) {
    const Model model = family.instantiate(n);
    if (!(lambda >= 0.0) || lambda > tilt_limit(model) * (1.0 + 1e-12)) {
      throw TiltRangeError("grid point outside the certified tilt range");
    }
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double delta = model.constants().delta;
    const std::uint64_t point_seed =
        RngStream::mix(seed, static_cast<std::uint64_t>(index));
    BoundRow row;
    row.model = family.name();
    row.n = n;
    row.lambda = lambda;
    if (quadratic) {
      row.lhs = sup_accumulated_deviation(
          model, lambda, 0.5 * lambda * lambda, sampled_histories, point_seed,
          [](const TiltedStepper& s, int state) { return s.log_mgf(state); });
      row.rhs_shape = lambda * lambda * (delta * delta) +
                      lambda * lambda * lambda / sqrt_n;
    } else {
      row.lhs = sup_accumulated_deviation(
          model, lambda, lambda, sampled_histories, point_seed,
          [](const TiltedStepper& s, int state) { return s.drift(state); });
      row.rhs_shape = lambda * (delta * delta) + lambda * lambda / sqrt_n;
    }
    row.fitted_c = row.rhs_shape > 0.0
                       ? row.lhs / row.rhs_shape
                       : (row.lhs == 0.0 ? 0.0 : kInf);
    row.pass = row.fitted_c <= c_max * (1.0 + kPassTolerance);
    table.max_fitted_c = std::max(table.max_fitted_c, row.fitted_c);
    table.pass = table.pass && row.pass;
    table.rows.push_back(std::move(row));
    ++index;
  }
  return table;
}

}  // namespace

Model ModelFamily::instantiate(long n) const {
  switch (kind) {
    case ModelKind::kRademacher:
      return Model::rademacher(n);
    case ModelKind::kHeteroscedastic:
      return Model::heteroscedastic(n, amplitude);
    case ModelKind::kTruncatedGaussian:
      return Model::truncated_gaussian(n, cutoff);
    case ModelKind::kBernsteinMixture:
      return spike_weight > 0.0
                 ? Model::bernstein_mixture(n, spike, spike_weight)
                 : Model::bernstein_mixture(n, spike);
  }
  throw InvalidInputError("unknown model kind");
}

ModelFamily family_from_name(const std::string& name) {
  ModelFamily family;
  if (name == "rademacher") {
    family.kind = ModelKind::kRademacher;
  } else if (name == "heteroscedastic") {
    family.kind = ModelKind::kHeteroscedastic;
  } else if (name == "truncated_gaussian") {
    family.kind = ModelKind::kTruncatedGaussian;
  } else if (name == "bernstein_mixture") {
    family.kind = ModelKind::kBernsteinMixture;
  } else {
    throw InvalidInputError("unknown model family: " + name);
  }
  return family;
}

std::vector<ModelFamily> default_families() {
  std::vector<ModelFamily> families(4);
  families[0].kind = ModelKind::kRademacher;
  families[1].kind = ModelKind::kHeteroscedastic;
  families[2].kind = ModelKind::kTruncatedGaussian;
  families[3].kind = ModelKind::kBernsteinMixture;
  return families;
}

std::vector<std::pair<long, double>> valid_tilt_pairs(
    const ModelFamily& family, std::span<const long> n_values,
    std::span<const double> lambdas) {
  std::vector<std::pair<long, double>> pairs;
  for (long n : n_values) {
    const Model model = family.instantiate(n);
    const double limit = tilt_limit(model) * (1.0 + 1e-12);
    for (double lambda : lambdas) {
      if (lambda >= 0.0 && lambda <= limit) pairs.emplace_back(n, lambda);
    }
  }
  return pairs;
}

BoundTable drift_linearity_check(
    const ModelFamily& family,
    std::span<const std::pair<long, double>> points, long sampled_histories,
    std::uint64_t seed, double c_max) {
  return bound_sweep(family, points, sampled_histories, seed, c_max, false);
}

BoundTable cumulant_check(const ModelFamily& family,
                          std::span<const std::pair<long, double>> points,
                          long sampled_histories, std::uint64_t seed,
                          double c_max) {
  return bound_sweep(family, points, sampled_histories, seed, c_max, true);
}

KsRow residual_normality_ks(const ModelFamily& family, long n, double lambda,
                            long replicates, std::uint64_t seed,
                            const ExecutionPolicy& policy) {
  if (replicates < 1) {
    throw InvalidInputError("replicate count must be at least 1");
  }
  const Model model = family.instantiate(n);
  TiltConfig config{lambda, model.constants()};
  config.validate(model);
  const TiltedStepper stepper(model, lambda);
  std::vector<double> residuals(static_cast<std::size_t>(replicates));
  struct Filler {
    void merge(const Filler&) {}
  };
  parallel_reduce_replicates<Filler>(
      replicates, policy.workers, [&](Filler&, long i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        CompensatedSum x_run;
        CompensatedSum drifts;
        for (long s = 0; s < n; ++s) {
          const int state = stepper.state(x_run.value());
          drifts.add(stepper.drift(state));
          x_run.add(stepper.sample(state, rng));
        }
        residuals[static_cast<std::size_t>(i)] = x_run.value() - drifts.value();
      });
  std::sort(residuals.begin(), residuals.end());
  const auto count = static_cast<double>(replicates);
  double ks = 0.0;
  for (long i = 0; i < replicates; ++i) {
    const double f = normal_cdf(residuals[static_cast<std::size_t>(i)]);
    const double below = static_cast<double>(i) / count;
    const double above = static_cast<double>(i + 1) / count;
    ks = std::max(ks, std::max(f - below, above - f));
  }
  KsRow row;
  row.model = family.name();
  row.n = n;
  row.lambda = lambda;
  row.replicates = replicates;
  row.ks = ks;
  row.sampling_band = 1.36 / std::sqrt(count);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  row.rhs_shape = lambda / sqrt_n +
                  std::log(static_cast<double>(n)) / sqrt_n +
                  model.constants().delta;
  row.fitted_c = std::max(0.0, ks - row.sampling_band) / row.rhs_shape;
  return row;
}

std::vector<ScanRow> tail_ratio_scan(std::span<const ModelFamily> families,
                                     std::span<const long> n_values,
                                     const ScanSettings& settings) {
  if (families.empty() || n_values.empty() || settings.x_values.empty()) {
    throw InvalidInputError("scan needs families, horizons and thresholds");
  }
  std::vector<ScanRow> rows;
  for (std::size_t fi = 0; fi < families.size(); ++fi) {
    const ModelFamily& family = families[fi];
    for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
      const long n = n_values[ni];
      const Model model = family.instantiate(n);
      const ConditionConstants& constants = model.constants();
      for (std::size_t xi = 0; xi < settings.x_values.size(); ++xi) {
        const double x = settings.x_values[xi];
        const int sides = settings.include_lower ? 2 : 1;
        for (int side = 0; side < sides; ++side) {
          TailSettings tail_settings;
          tail_settings.estimator = settings.estimator;
          tail_settings.replicates = settings.replicates;
          tail_settings.policy = settings.policy;
          tail_settings.seed = RngStream::mix(
              RngStream::mix(RngStream::mix(settings.seed, fi), ni),
              2 * xi + static_cast<std::size_t>(side));
          const RatioEstimate ratio =
              side == 0
                  ? tail_ratio(model, x, tail_settings, constants)
                  : tail_ratio(model.mirrored(), x, tail_settings, constants);
          const EnvelopeBounds env =
              envelope({x, n, constants.delta, settings.envelope_c},
                       constants.alpha0);
          ScanRow row;
          row.model = family.name();
          row.n = n;
          row.x = x;
          row.delta = constants.delta;
          row.estimator = settings.estimator;
          row.replicates = ratio.tail.replicates;
          row.seed = tail_settings.seed;
          row.tail = ratio.tail.value;
          row.std_error = ratio.tail.std_error;
          row.normal_tail_value = ratio.normal_tail_value;
          row.ratio = ratio.ratio;
          row.ratio_std_error = ratio.std_error;
          row.env_lower = env.lower;
          row.env_upper = env.upper;
          if (model.two_point()) row.flags.push_back("lattice");
          if (side == 1) row.flags.push_back("lower");
          if (!env.x_in_range) row.flags.push_back("outside_range");
          if (!(row.ratio >= env.lower && row.ratio <= env.upper)) {
            row.flags.push_back("outside_envelope");
          }
          if (ratio.tail.log_value == -kInf) row.flags.push_back("no_hits");
          if (ratio.tail.underflow) row.flags.push_back("underflow");
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

std::vector<MdpRow> mdp_scan(const ModelFamily& family, double x, double beta,
                             std::span<const long> n_values, long replicates,
                             std::uint64_t seed,
                             const ExecutionPolicy& policy) {
  if (!(beta > 0.0) || !(beta < 0.5)) {
    throw InvalidInputError("beta must lie strictly between 0 and 1/2");
  }
  if (n_values.empty()) throw InvalidInputError("need at least one horizon");
  std::vector<MdpRow> rows;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const long n = n_values[i];
    const Model model = family.instantiate(n);
    TailSettings settings;
    settings.estimator = EstimatorKind::kImportance;
    settings.replicates = replicates;
    settings.seed = RngStream::mix(seed, static_cast<std::uint64_t>(i));
    settings.policy = policy;
    const double a_n = std::pow(static_cast<double>(n), beta);
    const MdpPoint point =
        mdp_point(model, x, a_n, settings, model.constants());
    MdpRow row;
    row.n = n;
    row.a_n = point.a_n;
    row.threshold = point.threshold;
    row.value = point.value;
    row.target = -0.5 * x * x;
    row.gap = std::fabs(point.value - row.target);
    row.scaled_std_error =
        point.no_hits ? kInf
                      : (point.tail.std_error / point.tail.value) /
                            (a_n * a_n);
    row.no_hits = point.no_hits;
    rows.push_back(row);
  }
  return rows;
}

double calibrate_envelope_c(std::span<const ScanRow> rows, double alpha0) {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
    throw InvalidInputError("alpha0 must be positive");
  }
  double c = 0.0;
  long usable = 0;
  for (const ScanRow& row : rows) {
    const bool outside =
        std::find(row.flags.begin(), row.flags.end(), "outside_range") !=
        row.flags.end();
    if (outside) continue;
    ++usable;
    const bool exact = row.estimator == EstimatorKind::kEnumeration;
    if (!exact) {
      if (!(row.tail > 0.0)) {
        throw PrecisionError("calibration row has no tail hits");
      }
      if (row.ratio_std_error / row.ratio > 0.02) {
        throw PrecisionError(
            "calibration needs relative error at or below 2 percent");
      }
    }
    const double band = exact ? 0.0 : 2.0 * row.ratio_std_error;
    const double lo = row.ratio - band;
    const double hi = row.ratio + band;
    if (lo <= 1.0 && 1.0 <= hi) continue;
    const double distance =
        std::min(std::fabs(std::log(lo)), std::fabs(std::log(hi)));
    const double shape = envelope_exponent({row.x, row.n, row.delta, 1.0});
    c = std::max(c, distance / shape);
  }
  if (usable == 0) {
    throw InvalidInputError("no scan rows inside the calibration range");
  }
  return c;
}

}  // namespace mtilt
