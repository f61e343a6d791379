#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace mtilt::cli {

// Fully resolved experiment configuration. Loading fills every field, so a
// dumped config always re-parses to the same object (round-trip identity).
struct ModelBlock {
  std::string kind = "rademacher";
  long n = 16;
  double amplitude = 0.01;
  double cutoff = 3.0;
  double spike = 4.0;
  double spike_weight = 0.0625;

  bool operator==(const ModelBlock&) const = default;
};

struct ConstantsBlock {
  // Negative c0/c1/delta mean "resolve from the model's declared constants".
  double c0 = -1.0;
  double c1 = -1.0;
  double delta = -1.0;
  double alpha0 = 1.0;
  double c = 2.0;

  bool operator==(const ConstantsBlock&) const = default;
};

struct ExperimentBlock {
  std::string operation = "ratio";
  std::vector<std::string> families = {"rademacher", "heteroscedastic"};
  std::vector<long> n_values = {64, 256};
  std::vector<double> x_values = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> lambda_values = {0.25, 0.5, 1.0, 2.0};
  double x = 1.0;
  bool has_lambda = false;  // serialized as lambda: null when false
  double lambda = 0.0;
  std::string lambda_mode = "proxy";
  std::string estimator = "importance";
  std::string side = "upper";
  double beta = 0.25;
  int k_max = 12;
  bool has_epsilon = false;
  double epsilon = 0.0;
  bool has_bernstein_c = false;
  double bernstein_c = 0.0;
  double c_max = 2.0;
  bool include_lower = true;
  long sampled_histories = 32;
  std::vector<long> ks_n_values = {};
  double ks_lambda = 1.0;
  long ks_replicates = 100000;

  bool operator==(const ExperimentBlock&) const = default;
};

struct ExecutionBlock {
  long replicates = 100000;  // JSON key "N"
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = environment default

  bool operator==(const ExecutionBlock&) const = default;
};

struct OutputBlock {
  std::string csv;
  std::string json;
  std::string series_prefix;
  std::string svg;

  bool operator==(const OutputBlock&) const = default;
};

struct Config {
  ModelBlock model;
  ConstantsBlock constants;
  ExperimentBlock experiment;
  ExecutionBlock execution;
  OutputBlock output;

  bool operator==(const Config&) const = default;
};

// Parses and validates a config object: schema_version must be 1 and every
// key must be known. Missing keys take the defaults above.
Config parse_config(const nlohmann::json& doc);

// Reads, parses, and validates a JSON config file.
Config load_config(const std::string& path);

// Serializes the fully resolved config; parse_config(dump_config(c)) == c.
nlohmann::json dump_config(const Config& config);

}  // namespace mtilt::cli
