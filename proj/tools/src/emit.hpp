#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mtilt/conditions.hpp"
#include "mtilt/verify.hpp"

#include "config.hpp"

namespace mtilt::cli {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

inline constexpr const char* kRatioCsvHeader =
    "model,n,x,delta,estimator,N,seed,tail,stderr,normal_tail,ratio,"
    "ratio_stderr,env_lower,env_upper,flags";

// One row per grid point, flags joined with ';' inside the last column.
std::string ratio_csv(std::span<const ScanRow> rows);

std::string bound_csv(std::span<const BoundRow> rows);
std::string ks_csv(std::span<const KsRow> rows);
std::string mdp_csv(std::span<const MdpRow> rows);
std::string conditions_csv(
    std::span<const std::pair<std::string, ConditionReport>> reports);

// Plain-text series files: one per (model, n, side) group for ratio scans,
// header `# x ratio stderr lower upper`; a single `# n gap` file for MDP
// tables. Values reuse the CSV strings verbatim. Returns the paths written.
std::vector<std::string> write_ratio_series(const std::string& prefix,
                                            std::span<const ScanRow> rows);
std::vector<std::string> write_mdp_series(const std::string& prefix,
                                          std::span<const MdpRow> rows);

// Self-contained SVG line charts (no external assets).
std::string ratio_svg(std::span<const ScanRow> rows);
std::string mdp_svg(std::span<const MdpRow> rows);

// Summary envelope: metadata (tool, version, timestamp), the fully resolved
// config, and the per-command results payload.
nlohmann::json summary_json(const Config& config,
                            nlohmann::json results);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mtilt::cli
