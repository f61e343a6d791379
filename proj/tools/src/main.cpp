#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "mtilt/conditions.hpp"
#include "mtilt/errors.hpp"
#include "mtilt/estimators.hpp"
#include "mtilt/model.hpp"
#include "mtilt/tilting.hpp"
#include "mtilt/verify.hpp"

#include "config.hpp"
#include "emit.hpp"

namespace {

using namespace mtilt;
using cli::Config;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAssertion = 4;

// Command-line values that override the (defaulted or loaded) config.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> model;
  std::optional<long> n;
  std::optional<double> amplitude, cutoff, spike, spike_weight;
  std::optional<double> c0, c1, delta, alpha0, c;
  std::optional<double> x, lambda, beta, c_max, epsilon, bernstein_c;
  std::optional<double> ks_lambda;
  std::optional<std::string> estimator, lambda_mode, side;
  std::optional<long> replicates, sampled_histories, ks_replicates;
  std::optional<int> workers, k_max;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> families;
  std::vector<long> n_values, ks_n_values;
  std::vector<double> x_values, lambda_values;
  std::optional<bool> include_lower;
  std::optional<std::string> csv, json_path, series_prefix, svg;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--model", o.model,
                  "rademacher | heteroscedastic | truncated_gaussian | "
                  "bernstein_mixture");
  cmd->add_option("--n", o.n, "number of increments");
  cmd->add_option("--amplitude", o.amplitude,
                  "heteroscedastic variance amplitude");
  cmd->add_option("--cutoff", o.cutoff, "truncation point");
  cmd->add_option("--spike", o.spike, "mixture spike height");
  cmd->add_option("--spike-weight", o.spike_weight,
                  "mixture spike probability");
  cmd->add_option("--c0", o.c0, "exponential moment rate");
  cmd->add_option("--c1", o.c1, "exponential moment bound");
  cmd->add_option("--delta", o.delta, "variance band half-width");
  cmd->add_option("--alpha0", o.alpha0, "threshold range constant");
  cmd->add_option("--c", o.c, "envelope constant");
  cmd->add_option("--N,--replicates", o.replicates, "Monte Carlo replicates");
  cmd->add_option("--seed", o.seed, "experiment seed");
  cmd->add_option("--workers", o.workers,
                  "worker threads (0 = MTILT_WORKERS or hardware)");
  cmd->add_option("--csv", o.csv, "CSV output path");
  cmd->add_option("--json", o.json_path, "JSON summary output path");
  cmd->add_option("--series-prefix", o.series_prefix,
                  "plot-data series file prefix");
  cmd->add_option("--svg", o.svg, "SVG chart output path");
}

Config resolve_config(const Overrides& o, const std::string& operation) {
  Config config;
  if (o.config_path) config = cli::load_config(*o.config_path);
  config.experiment.operation = operation;
  if (o.model) config.model.kind = *o.model;
  if (o.n) config.model.n = *o.n;
  if (o.amplitude) config.model.amplitude = *o.amplitude;
  if (o.cutoff) config.model.cutoff = *o.cutoff;
  if (o.spike) config.model.spike = *o.spike;
  if (o.spike_weight) config.model.spike_weight = *o.spike_weight;
  if (o.c0) config.constants.c0 = *o.c0;
  if (o.c1) config.constants.c1 = *o.c1;
  if (o.delta) config.constants.delta = *o.delta;
  if (o.alpha0) config.constants.alpha0 = *o.alpha0;
  if (o.c) config.constants.c = *o.c;
  if (o.x) config.experiment.x = *o.x;
  if (o.lambda) {
    config.experiment.has_lambda = true;
    config.experiment.lambda = *o.lambda;
  }
  if (o.beta) config.experiment.beta = *o.beta;
  if (o.c_max) config.experiment.c_max = *o.c_max;
  if (o.epsilon) {
    config.experiment.has_epsilon = true;
    config.experiment.epsilon = *o.epsilon;
  }
  if (o.bernstein_c) {
    config.experiment.has_bernstein_c = true;
    config.experiment.bernstein_c = *o.bernstein_c;
  }
  if (o.estimator) config.experiment.estimator = *o.estimator;
  if (o.lambda_mode) config.experiment.lambda_mode = *o.lambda_mode;
  if (o.side) config.experiment.side = *o.side;
  if (!o.families.empty()) config.experiment.families = o.families;
  if (!o.n_values.empty()) config.experiment.n_values = o.n_values;
  if (!o.x_values.empty()) config.experiment.x_values = o.x_values;
  if (!o.lambda_values.empty()) {
    config.experiment.lambda_values = o.lambda_values;
  }
  if (o.include_lower) config.experiment.include_lower = *o.include_lower;
  if (o.sampled_histories) {
    config.experiment.sampled_histories = *o.sampled_histories;
  }
  if (!o.ks_n_values.empty()) config.experiment.ks_n_values = o.ks_n_values;
  if (o.ks_lambda) config.experiment.ks_lambda = *o.ks_lambda;
  if (o.ks_replicates) config.experiment.ks_replicates = *o.ks_replicates;
  if (o.k_max) config.experiment.k_max = *o.k_max;
  if (o.replicates) config.execution.replicates = *o.replicates;
  if (o.seed) config.execution.seed = *o.seed;
  if (o.workers) config.execution.workers = *o.workers;
  if (o.csv) config.output.csv = *o.csv;
  if (o.json_path) config.output.json = *o.json_path;
  if (o.series_prefix) config.output.series_prefix = *o.series_prefix;
  if (o.svg) config.output.svg = *o.svg;
  return config;
}

Model model_from_config(const Config& config) {
  const std::string& kind = config.model.kind;
  const long n = config.model.n;
  if (kind == "rademacher") return Model::rademacher(n);
  if (kind == "heteroscedastic") {
    return Model::heteroscedastic(n, config.model.amplitude);
  }
  if (kind == "truncated_gaussian") {
    return Model::truncated_gaussian(n, config.model.cutoff);
  }
  if (kind == "bernstein_mixture") {
    return Model::bernstein_mixture(n, config.model.spike,
                                    config.model.spike_weight);
  }
  throw InvalidInputError("unknown model kind: " + kind);
}

ModelFamily family_from_config(const Config& config) {
  ModelFamily family = family_from_name(config.model.kind);
  family.amplitude = config.model.amplitude;
  family.cutoff = config.model.cutoff;
  family.spike = config.model.spike;
  family.spike_weight = config.model.spike_weight;
  return family;
}

// Model-declared constants, with explicit config/flag values taking over.
ConditionConstants constants_from_config(const Config& config,
                                         const Model& model) {
  ConditionConstants constants = model.constants();
  if (config.constants.c0 >= 0.0) constants.c0 = config.constants.c0;
  if (config.constants.c1 >= 0.0) constants.c1 = config.constants.c1;
  if (config.constants.delta >= 0.0) constants.delta = config.constants.delta;
  constants.alpha0 = config.constants.alpha0;
  constants.c_alpha0 = config.constants.c;
  constants.validate();
  return constants;
}

std::vector<ModelFamily> families_from_config(const Config& config) {
  std::vector<ModelFamily> families;
  for (const std::string& name : config.experiment.families) {
    ModelFamily family = family_from_name(name);
    family.amplitude = config.model.amplitude;
    family.cutoff = config.model.cutoff;
    family.spike = config.model.spike;
    family.spike_weight = config.model.spike_weight;
    families.push_back(family);
  }
  return families;
}

TailSettings tail_settings_from_config(const Config& config) {
  TailSettings settings;
  settings.estimator = estimator_from_string(config.experiment.estimator);
  settings.lambda = config.experiment.has_lambda
                        ? config.experiment.lambda
                        : std::numeric_limits<double>::quiet_NaN();
  settings.lambda_mode = lambda_mode_from_string(config.experiment.lambda_mode);
  settings.replicates = config.execution.replicates;
  settings.seed = config.execution.seed;
  settings.policy.workers = config.execution.workers;
  return settings;
}

void maybe_write_json(const Config& config, nlohmann::json results) {
  if (config.output.json.empty()) return;
  cli::write_text_file(config.output.json,
                       cli::summary_json(config, std::move(results)).dump(2) +
                           "\n");
}

nlohmann::json estimate_json(const Estimate& est) {
  return {{"value", est.value},
          {"log_value", est.log_value},
          {"stderr", est.std_error},
          {"N", est.replicates},
          {"seed", est.seed},
          {"lambda", est.lambda},
          {"estimator", to_string(est.estimator)},
          {"underflow", est.underflow}};
}

int cmd_check_conditions(const Config& config) {
  const Model model = model_from_config(config);
  const ConditionConstants constants = constants_from_config(config, model);
  std::vector<std::pair<std::string, ConditionReport>> reports;
  reports.push_back({"A1", check_a1(model, constants.c0, constants.c1)});
  reports.push_back({"A2", check_a2(model, constants.delta)});
  if (config.experiment.has_epsilon) {
    reports.push_back(
        {"A1prime", check_a1_prime(model, config.experiment.epsilon,
                                   constants.c1, config.experiment.k_max)});
  }
  if (config.experiment.has_bernstein_c) {
    reports.push_back(
        {"Bernstein", check_bernstein(model, config.experiment.bernstein_c,
                                      config.experiment.k_max)});
  }
  if (reports.front().second.holds) {
    reports.push_back(
        {"Lemma31", moment_bound_check(model, constants.c0, constants.c1,
                                       config.experiment.k_max)});
  }
  bool all_hold = true;
  nlohmann::json results = nlohmann::json::array();
  for (const auto& [name, report] : reports) {
    all_hold = all_hold && report.holds;
    std::printf("%-9s measured=%s bound=%s holds=%s\n", name.c_str(),
                cli::format_double(report.measured).c_str(),
                cli::format_double(report.bound).c_str(),
                report.holds ? "yes" : "no");
    nlohmann::json detail = nlohmann::json::array();
    for (const ConditionDetail& d : report.detail) {
      detail.push_back(
          {{"entry", d.label}, {"measured", d.measured}, {"bound", d.bound}});
    }
    results.push_back({{"check", name},
                       {"measured", report.measured},
                       {"bound", report.bound},
                       {"holds", report.holds},
                       {"detail", std::move(detail)}});
  }
  if (!reports.front().second.holds) {
    std::printf("Lemma31   skipped (needs A1 to hold)\n");
  }
  if (!config.output.csv.empty()) {
    cli::write_text_file(config.output.csv, cli::conditions_csv(reports));
  }
  maybe_write_json(config, {{"checks", std::move(results)}});
  return all_hold ? kExitOk : kExitAssertion;
}

int cmd_tail(const Config& config) {
  const Model base = model_from_config(config);
  const ConditionConstants constants = constants_from_config(config, base);
  const TailSettings settings = tail_settings_from_config(config);
  const bool lower = config.experiment.side == "lower";
  if (!lower && config.experiment.side != "upper") {
    throw InvalidInputError("side must be 'upper' or 'lower'");
  }
  const double x = config.experiment.x;
  const Estimate est = lower ? lower_tail(base, x, settings, constants)
                             : tail_estimate(base, x, settings, constants);
  std::printf("%s tail at x=%s: %.7g\n", lower ? "lower" : "upper",
              cli::format_double(x).c_str(), est.value);
  std::printf("value = %s\n", cli::format_double(est.value).c_str());
  std::printf("stderr = %s\n", cli::format_double(est.std_error).c_str());
  std::printf("log_value = %s\n", cli::format_double(est.log_value).c_str());
  std::printf("lambda = %s  estimator = %s  N = %ld  seed = %llu\n",
              cli::format_double(est.lambda).c_str(),
              to_string(est.estimator).c_str(), est.replicates,
              static_cast<unsigned long long>(est.seed));
  if (est.underflow) std::printf("flags = underflow\n");
  maybe_write_json(config, {{"tail", estimate_json(est)},
                            {"x", x},
                            {"side", lower ? "lower" : "upper"}});
  return kExitOk;
}

int cmd_enumerate(const Config& config) {
  const Model model = model_from_config(config);
  const double x = config.experiment.x;
  const Estimate est =
      config.experiment.has_lambda && config.experiment.lambda != 0.0
          ? tilted_tail_enumeration(model, x, config.experiment.lambda)
          : exact_tail_enumeration(model, x);
  std::printf("exact tail at x=%s: %.7g\n", cli::format_double(x).c_str(),
              est.value);
  std::printf("value = %s\n", cli::format_double(est.value).c_str());
  std::printf("paths = %ld\n", est.replicates);
  maybe_write_json(config, {{"tail", estimate_json(est)}, {"x", x}});
  return kExitOk;
}

int cmd_ratio(const Config& config) {
  const std::vector<ModelFamily> families = families_from_config(config);
  ScanSettings settings;
  settings.x_values = config.experiment.x_values;
  settings.estimator = estimator_from_string(config.experiment.estimator);
  settings.replicates = config.execution.replicates;
  settings.seed = config.execution.seed;
  settings.envelope_c = config.constants.c;
  settings.include_lower = config.experiment.include_lower;
  settings.policy.workers = config.execution.workers;
  const std::vector<ScanRow> rows =
      tail_ratio_scan(families, config.experiment.n_values, settings);
  const std::string csv = cli::ratio_csv(rows);
  if (!config.output.csv.empty()) {
    cli::write_text_file(config.output.csv, csv);
  } else {
    std::fputs(csv.c_str(), stdout);
  }
  if (!config.output.series_prefix.empty()) {
    cli::write_ratio_series(config.output.series_prefix, rows);
  }
  if (!config.output.svg.empty()) {
    cli::write_text_file(config.output.svg, cli::ratio_svg(rows));
  }
  maybe_write_json(config, {{"rows", rows.size()},
                            {"csv", config.output.csv},
                            {"alpha0", config.constants.alpha0}});
  return kExitOk;
}

int cmd_lemmas(const Config& config) {
  const std::vector<ModelFamily> families = families_from_config(config);
  std::vector<BoundRow> drift_rows, cumulant_rows;
  std::vector<KsRow> ks_rows;
  bool pass = true;
  double max_fitted = 0.0;
  for (const ModelFamily& family : families) {
    const auto points =
        valid_tilt_pairs(family, config.experiment.n_values,
                         config.experiment.lambda_values);
    if (points.empty()) continue;
    const BoundTable drift =
        drift_linearity_check(family, points,
                              config.experiment.sampled_histories,
                              config.execution.seed, config.experiment.c_max);
    const BoundTable cumulant =
        cumulant_check(family, points, config.experiment.sampled_histories,
                       config.execution.seed, config.experiment.c_max);
    pass = pass && drift.pass && cumulant.pass;
    max_fitted = std::max({max_fitted, drift.max_fitted_c,
                           cumulant.max_fitted_c});
    drift_rows.insert(drift_rows.end(), drift.rows.begin(), drift.rows.end());
    cumulant_rows.insert(cumulant_rows.end(), cumulant.rows.begin(),
                         cumulant.rows.end());
    for (long ks_n : config.experiment.ks_n_values) {
      const double lambda = config.experiment.ks_lambda;
      const Model probe = family.instantiate(ks_n);
      const double limit =
          0.25 * probe.constants().c0 * std::sqrt(static_cast<double>(ks_n));
      if (lambda > limit) continue;
      ExecutionPolicy policy{config.execution.workers};
      ks_rows.push_back(residual_normality_ks(
          family, ks_n, lambda, config.experiment.ks_replicates,
          config.execution.seed, policy));
    }
  }
  std::printf("drift rows = %zu, cumulant rows = %zu, ks rows = %zu\n",
              drift_rows.size(), cumulant_rows.size(), ks_rows.size());
  std::printf("max fitted c = %s (c_max = %s)\n",
              cli::format_double(max_fitted).c_str(),
              cli::format_double(config.experiment.c_max).c_str());
  std::printf("bounds %s\n", pass ? "hold" : "FAIL");
  if (!config.output.csv.empty()) {
    std::string csv = "table,";
    csv += "model,n,lambda,lhs,rhs_shape,fitted_c,pass\n";
    const auto append = [&](const char* table,
                            std::span<const BoundRow> rows) {
      for (const BoundRow& row : rows) {
        csv += table;
        csv += ',';
        csv += row.model;
        csv += ',';
        csv += std::to_string(row.n);
        csv += ',';
        csv += cli::format_double(row.lambda);
        csv += ',';
        csv += cli::format_double(row.lhs);
        csv += ',';
        csv += cli::format_double(row.rhs_shape);
        csv += ',';
        csv += cli::format_double(row.fitted_c);
        csv += ',';
        csv += row.pass ? '1' : '0';
        csv += '\n';
      }
    };
    append("drift", drift_rows);
    append("cumulant", cumulant_rows);
    cli::write_text_file(config.output.csv, csv);
  }
  if (!ks_rows.empty() && !config.output.series_prefix.empty()) {
    cli::write_text_file(config.output.series_prefix + "_ks.csv",
                         cli::ks_csv(ks_rows));
  }
  nlohmann::json ks_json = nlohmann::json::array();
  for (const KsRow& row : ks_rows) {
    ks_json.push_back({{"model", row.model},
                       {"n", row.n},
                       {"lambda", row.lambda},
                       {"N", row.replicates},
                       {"ks", row.ks},
                       {"sampling_band", row.sampling_band},
                       {"rhs_shape", row.rhs_shape},
                       {"fitted_c", row.fitted_c}});
  }
  maybe_write_json(config, {{"max_fitted_c", max_fitted},
                            {"c_max", config.experiment.c_max},
                            {"pass", pass},
                            {"drift_rows", drift_rows.size()},
                            {"cumulant_rows", cumulant_rows.size()},
                            {"ks", std::move(ks_json)}});
  return pass ? kExitOk : kExitAssertion;
}

int cmd_mdp(const Config& config) {
  const ModelFamily family = family_from_config(config);
  ExecutionPolicy policy{config.execution.workers};
  const std::vector<MdpRow> rows =
      mdp_scan(family, config.experiment.x, config.experiment.beta,
               config.experiment.n_values, config.execution.replicates,
               config.execution.seed, policy);
  const std::string csv = cli::mdp_csv(rows);
  if (!config.output.csv.empty()) {
    cli::write_text_file(config.output.csv, csv);
  } else {
    std::fputs(csv.c_str(), stdout);
  }
  if (!config.output.series_prefix.empty()) {
    cli::write_mdp_series(config.output.series_prefix, rows);
  }
  if (!config.output.svg.empty()) {
    cli::write_text_file(config.output.svg, cli::mdp_svg(rows));
  }
  nlohmann::json rows_json = nlohmann::json::array();
  for (const MdpRow& row : rows) {
    rows_json.push_back({{"n", row.n},
                         {"a_n", row.a_n},
                         {"value", row.value},
                         {"target", row.target},
                         {"gap", row.gap},
                         {"scaled_stderr", row.scaled_std_error},
                         {"no_hits", row.no_hits}});
  }
  maybe_write_json(config, {{"rows", std::move(rows_json)}});
  return kExitOk;
}

int cmd_calibrate(const Config& config) {
  const std::vector<ModelFamily> families = families_from_config(config);
  ScanSettings settings;
  settings.x_values = config.experiment.x_values;
  settings.estimator = estimator_from_string(config.experiment.estimator);
  settings.replicates = config.execution.replicates;
  settings.seed = config.execution.seed;
  settings.envelope_c = config.constants.c;
  settings.include_lower = config.experiment.include_lower;
  settings.policy.workers = config.execution.workers;
  const std::vector<ScanRow> rows =
      tail_ratio_scan(families, config.experiment.n_values, settings);
  const double fitted = calibrate_envelope_c(rows, config.constants.alpha0);
  std::printf("calibrated envelope c = %s over %zu rows\n",
              cli::format_double(fitted).c_str(), rows.size());
  if (!config.output.csv.empty()) {
    cli::write_text_file(config.output.csv, cli::ratio_csv(rows));
  }
  maybe_write_json(config, {{"calibrated_c", fitted},
                            {"rows", rows.size()},
                            {"alpha0", config.constants.alpha0}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Martingale tail-ratio laboratory"};
  app.require_subcommand(1);
  Overrides o;

  CLI::App* check = app.add_subcommand(
      "check-conditions", "Evaluate the model's moment conditions");
  add_common_flags(check, o);
  check->add_option("--epsilon", o.epsilon,
                    "also run the factorial-growth check at this scale");
  check->add_option("--bernstein-c", o.bernstein_c,
                    "also run the conditional Bernstein check");
  check->add_option("--k-max", o.k_max, "highest moment order");

  CLI::App* tail = app.add_subcommand("tail", "One tail-probability estimate");
  add_common_flags(tail, o);
  tail->add_option("--x", o.x, "threshold");
  tail->add_option("--lambda", o.lambda, "tilt parameter (default: solved)");
  tail->add_option("--lambda-mode", o.lambda_mode, "proxy | root_find");
  tail->add_option("--estimator", o.estimator,
                   "naive | importance | enumeration");
  tail->add_option("--side", o.side, "upper | lower");

  CLI::App* enumerate =
      app.add_subcommand("enumerate", "Exact tail by path enumeration");
  add_common_flags(enumerate, o);
  enumerate->add_option("--x", o.x, "threshold");
  enumerate->add_option("--lambda", o.lambda,
                        "check the tilted estimator instead of the plain sum");

  CLI::App* ratio =
      app.add_subcommand("ratio", "Tail / normal-tail ratio scan");
  add_common_flags(ratio, o);
  ratio->add_option("--families", o.families, "model families to scan");
  ratio->add_option("--n-values", o.n_values, "horizons");
  ratio->add_option("--x-values", o.x_values, "thresholds");
  ratio->add_option("--estimator", o.estimator,
                    "naive | importance | enumeration");
  ratio->add_flag("--include-lower,!--no-lower", o.include_lower,
                  "also scan the lower tail");

  CLI::App* lemmas =
      app.add_subcommand("lemmas", "Drift, cumulant and normality sweeps");
  add_common_flags(lemmas, o);
  lemmas->add_option("--families", o.families, "model families to sweep");
  lemmas->add_option("--n-values", o.n_values, "horizons");
  lemmas->add_option("--lambda-values", o.lambda_values, "tilt grid");
  lemmas->add_option("--c-max", o.c_max, "largest acceptable fitted constant");
  lemmas->add_option("--sampled-histories", o.sampled_histories,
                     "history sample size beyond the exhaustive range");
  lemmas->add_option("--ks-n-values", o.ks_n_values,
                     "horizons for the residual normality check");
  lemmas->add_option("--ks-lambda", o.ks_lambda, "tilt for the KS check");
  lemmas->add_option("--ks-replicates", o.ks_replicates,
                     "replicates for the KS check");

  CLI::App* mdp =
      app.add_subcommand("mdp", "Moderate-deviation convergence scan");
  add_common_flags(mdp, o);
  mdp->add_option("--x", o.x, "deviation scale");
  mdp->add_option("--beta", o.beta, "speed exponent, a_n = n^beta");
  mdp->add_option("--n-values", o.n_values, "horizons");

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Fit the envelope constant to a scan");
  add_common_flags(calibrate, o);
  calibrate->add_option("--families", o.families, "model families");
  calibrate->add_option("--n-values", o.n_values, "horizons");
  calibrate->add_option("--x-values", o.x_values, "thresholds");
  calibrate->add_option("--estimator", o.estimator,
                        "naive | importance | enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (check->parsed()) {
      return cmd_check_conditions(resolve_config(o, "check-conditions"));
    }
    if (tail->parsed()) return cmd_tail(resolve_config(o, "tail"));
    if (enumerate->parsed()) {
      return cmd_enumerate(resolve_config(o, "enumerate"));
    }
    if (ratio->parsed()) return cmd_ratio(resolve_config(o, "ratio"));
    if (lemmas->parsed()) return cmd_lemmas(resolve_config(o, "lemmas"));
    if (mdp->parsed()) return cmd_mdp(resolve_config(o, "mdp"));
    if (calibrate->parsed()) {
      return cmd_calibrate(resolve_config(o, "calibrate"));
    }
  } catch (const InvalidInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const UnsupportedModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const UnsupportedModeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const TiltRangeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const ResourceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const PrecisionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitValidation;
}
