#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtilt/estimators.hpp"
#include "mtilt/model.hpp"

namespace mtilt {

// A model family with every parameter fixed except the horizon n.
struct ModelFamily {
  ModelKind kind = ModelKind::kRademacher;
  double amplitude = 0.01;   // heteroscedastic
  double cutoff = 3.0;       // truncated gaussian
  double spike = 4.0;        // mixture
  double spike_weight = 0.0; // mixture; <= 0 means the default 1/spike^2

  Model instantiate(long n) const;
  std::string name() const { return to_string(kind); }
};

ModelFamily family_from_name(const std::string& name);
std::vector<ModelFamily> default_families();

// (n, lambda) grid points whose tilt stays inside the certified range
// [0, c0 sqrt(n) / 4] for this family, in (n, lambda) iteration order.
std::vector<std::pair<long, double>> valid_tilt_pairs(
    const ModelFamily& family, std::span<const long> n_values,
    std::span<const double> lambdas);

// One grid point of a supremum-of-deviation check: lhs is the measured
// supremum, rhs_shape the bound with constant 1, fitted_c their ratio.
struct BoundRow {
  std::string model;
  long n = 0;
  double lambda = 0.0;
  double lhs = 0.0;
  double rhs_shape = 0.0;
  double fitted_c = 0.0;
  bool pass = false;
};

struct BoundTable {
  std::vector<BoundRow> rows;
  double c_max = 2.0;
  double max_fitted_c = 0.0;
  bool pass = true;
};

// Checks that the total tilted drift stays within
// c (lambda delta^2 + lambda^2 / sqrt(n)) of lambda, uniformly over
// histories: all 2^n histories when n <= 12, otherwise sampled_histories
// simulated ones, plus the constant extremal states either way. Throws
// TiltRangeError if a grid point lies outside the certified tilt range.
BoundTable drift_linearity_check(const ModelFamily& family,
                                 std::span<const std::pair<long, double>> points,
                                 long sampled_histories, std::uint64_t seed,
                                 double c_max = 2.0);

// Same sweep for the accumulated cumulant against lambda^2 / 2, with shape
// c (lambda^2 delta^2 + lambda^3 / sqrt(n)).
BoundTable cumulant_check(const ModelFamily& family,
                          std::span<const std::pair<long, double>> points,
                          long sampled_histories, std::uint64_t seed,
                          double c_max = 2.0);

// Kolmogorov-Smirnov distance between the recentred tilted endpoint and the
// standard normal, with the sampling band and the fitted constant against
// the shape lambda/sqrt(n) + log(n)/sqrt(n) + delta.
struct KsRow {
  std::string model;
  long n = 0;
  double lambda = 0.0;
  long replicates = 0;
  double ks = 0.0;
  double sampling_band = 0.0;
  double rhs_shape = 0.0;
  double fitted_c = 0.0;
};

KsRow residual_normality_ks(const ModelFamily& family, long n, double lambda,
                            long replicates, std::uint64_t seed,
                            const ExecutionPolicy& policy = {});

// One row of the tail-ratio scan; flags holds tokens such as "lattice",
// "lower", "outside_range", "no_hits", "underflow".
struct ScanRow {
  std::string model;
  long n = 0;
  double x = 0.0;
  double delta = 0.0;
  EstimatorKind estimator = EstimatorKind::kImportance;
  long replicates = 0;
  std::uint64_t seed = 0;
  double tail = 0.0;
  double std_error = 0.0;
  double normal_tail_value = 0.0;
  double ratio = 0.0;
  double ratio_std_error = 0.0;
  double env_lower = 0.0;
  double env_upper = 0.0;
  std::vector<std::string> flags;
};

struct ScanSettings {
  std::vector<double> x_values;
  EstimatorKind estimator = EstimatorKind::kImportance;
  long replicates = 200000;
  std::uint64_t seed = 1;
  double envelope_c = 2.0;
  bool include_lower = true;
  ExecutionPolicy policy;
};

// Tail-over-normal ratios with envelope bounds across families, horizons and
// thresholds. Row seeds derive from (family, n, x, side) indices, so the
// table is reproducible row by row and independent of worker count.
std::vector<ScanRow> tail_ratio_scan(std::span<const ModelFamily> families,
                                     std::span<const long> n_values,
                                     const ScanSettings& settings);

struct MdpRow {
  long n = 0;
  double a_n = 0.0;
  double threshold = 0.0;
  double value = 0.0;   // log P(X_n > a_n x) / a_n^2
  double target = 0.0;  // -x^2 / 2
  double gap = 0.0;
  double scaled_std_error = 0.0;
  bool no_hits = false;
};

// Moderate-deviation diagnostic along a_n = n^beta, beta in (0, 1/2).
std::vector<MdpRow> mdp_scan(const ModelFamily& family, double x, double beta,
                             std::span<const long> n_values, long replicates,
                             std::uint64_t seed,
                             const ExecutionPolicy& policy = {});

// Smallest envelope constant covering every scan row within its statistical
// band: rows whose two-standard-error interval straddles ratio 1 demand
// nothing, others demand |log ratio-endpoint| / shape. Rows outside the
// x <= alpha0 sqrt(n) range are excluded. Throws PrecisionError if any
// usable Monte Carlo row has relative error above 2 percent.
double calibrate_envelope_c(std::span<const ScanRow> rows, double alpha0);

}  // namespace mtilt
