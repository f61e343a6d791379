#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "mtilt/errors.hpp"

namespace mtilt::cli {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw InvalidInputError(std::string("config: ") + where +
                            " must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw InvalidInputError(std::string("config: unknown key '") +
                              item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInputError(std::string("config: bad value for '") + key +
                            "'");
  }
}

void read_optional(const json& obj, const char* key, bool& has, double& out) {
  if (!obj.contains(key)) return;
  const json& value = obj.at(key);
  if (value.is_null()) {
    has = false;
    return;
  }
  try {
    out = value.get<double>();
    has = true;
  } catch (const json::exception&) {
    throw InvalidInputError(std::string("config: bad value for '") + key +
                            "'");
  }
}

json dump_optional(bool has, double value) {
  if (!has) return nullptr;
  return value;
}

}  // namespace

Config parse_config(const json& doc) {
  check_keys(doc, "top level",
             {"schema_version", "model", "constants", "experiment",
              "execution", "output"});
  if (!doc.contains("schema_version")) {
    throw InvalidInputError("config: missing schema_version");
  }
  if (!doc.at("schema_version").is_number_integer() ||
      doc.at("schema_version").get<long>() != 1) {
    throw InvalidInputError("config: schema_version must be 1");
  }

  Config config;
  if (doc.contains("model")) {
    const json& m = doc.at("model");
    check_keys(m, "model",
               {"kind", "n", "amplitude", "cutoff", "spike", "spike_weight"});
    read(m, "kind", config.model.kind);
    read(m, "n", config.model.n);
    read(m, "amplitude", config.model.amplitude);
    read(m, "cutoff", config.model.cutoff);
    read(m, "spike", config.model.spike);
    read(m, "spike_weight", config.model.spike_weight);
  }
  if (doc.contains("constants")) {
    const json& c = doc.at("constants");
    check_keys(c, "constants", {"c0", "c1", "delta", "alpha0", "c"});
    read(c, "c0", config.constants.c0);
    read(c, "c1", config.constants.c1);
    read(c, "delta", config.constants.delta);
    read(c, "alpha0", config.constants.alpha0);
    read(c, "c", config.constants.c);
  }
  if (doc.contains("experiment")) {
    const json& e = doc.at("experiment");
    check_keys(e, "experiment",
               {"operation", "families", "n_values", "x_values",
                "lambda_values", "x", "lambda", "lambda_mode", "estimator",
                "side", "beta", "k_max", "epsilon", "bernstein_c", "c_max",
                "include_lower", "sampled_histories", "ks_n_values",
                "ks_lambda", "ks_replicates"});
    read(e, "operation", config.experiment.operation);
    read(e, "families", config.experiment.families);
    read(e, "n_values", config.experiment.n_values);
    read(e, "x_values", config.experiment.x_values);
    read(e, "lambda_values", config.experiment.lambda_values);
    read(e, "x", config.experiment.x);
    read_optional(e, "lambda", config.experiment.has_lambda,
                  config.experiment.lambda);
    read(e, "lambda_mode", config.experiment.lambda_mode);
    read(e, "estimator", config.experiment.estimator);
    read(e, "side", config.experiment.side);
    read(e, "beta", config.experiment.beta);
    read(e, "k_max", config.experiment.k_max);
    read_optional(e, "epsilon", config.experiment.has_epsilon,
                  config.experiment.epsilon);
    read_optional(e, "bernstein_c", config.experiment.has_bernstein_c,
                  config.experiment.bernstein_c);
    read(e, "c_max", config.experiment.c_max);
    read(e, "include_lower", config.experiment.include_lower);
    read(e, "sampled_histories", config.experiment.sampled_histories);
    read(e, "ks_n_values", config.experiment.ks_n_values);
    read(e, "ks_lambda", config.experiment.ks_lambda);
    read(e, "ks_replicates", config.experiment.ks_replicates);
  }
  if (doc.contains("execution")) {
    const json& x = doc.at("execution");
    check_keys(x, "execution", {"N", "seed", "workers"});
    read(x, "N", config.execution.replicates);
    read(x, "seed", config.execution.seed);
    read(x, "workers", config.execution.workers);
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"csv", "json", "series_prefix", "svg"});
    read(o, "csv", config.output.csv);
    read(o, "json", config.output.json);
    read(o, "series_prefix", config.output.series_prefix);
    read(o, "svg", config.output.svg);
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidInputError("config: cannot open " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("config: parse failure: ") + e.what());
  }
  return parse_config(doc);
}

json dump_config(const Config& config) {
  json doc;
  doc["schema_version"] = 1;
  doc["model"] = {{"kind", config.model.kind},
                  {"n", config.model.n},
                  {"amplitude", config.model.amplitude},
                  {"cutoff", config.model.cutoff},
                  {"spike", config.model.spike},
                  {"spike_weight", config.model.spike_weight}};
  doc["constants"] = {{"c0", config.constants.c0},
                      {"c1", config.constants.c1},
                      {"delta", config.constants.delta},
                      {"alpha0", config.constants.alpha0},
                      {"c", config.constants.c}};
  doc["experiment"] = {
      {"operation", config.experiment.operation},
      {"families", config.experiment.families},
      {"n_values", config.experiment.n_values},
      {"x_values", config.experiment.x_values},
      {"lambda_values", config.experiment.lambda_values},
      {"x", config.experiment.x},
      {"lambda",
       dump_optional(config.experiment.has_lambda, config.experiment.lambda)},
      {"lambda_mode", config.experiment.lambda_mode},
      {"estimator", config.experiment.estimator},
      {"side", config.experiment.side},
      {"beta", config.experiment.beta},
      {"k_max", config.experiment.k_max},
      {"epsilon", dump_optional(config.experiment.has_epsilon,
                                config.experiment.epsilon)},
      {"bernstein_c", dump_optional(config.experiment.has_bernstein_c,
                                    config.experiment.bernstein_c)},
      {"c_max", config.experiment.c_max},
      {"include_lower", config.experiment.include_lower},
      {"sampled_histories", config.experiment.sampled_histories},
      {"ks_n_values", config.experiment.ks_n_values},
      {"ks_lambda", config.experiment.ks_lambda},
      {"ks_replicates", config.experiment.ks_replicates}};
  doc["execution"] = {{"N", config.execution.replicates},
                      {"seed", config.execution.seed},
                      {"workers", config.execution.workers}};
  doc["output"] = {{"csv", config.output.csv},
                   {"json", config.output.json},
                   {"series_prefix", config.output.series_prefix},
                   {"svg", config.output.svg}};
  return doc;
}

}  // namespace mtilt::cli
