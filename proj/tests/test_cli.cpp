#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

// Drives the installed command-line binary as a subprocess and checks its
// observable contract: stdout text, exit codes and emitted files.

namespace {

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::filesystem::path work_dir() {
  static const auto dir = [] {
    auto d = std::filesystem::temp_directory_path() / "mtilt_cli_test";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const auto out = work_dir() / ("out" + std::to_string(counter) + ".txt");
  const auto err = work_dir() / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd;
  if (!env.empty()) cmd += "env " + env + " ";
  cmd += MTILT_CLI_PATH;
  cmd += " " + args + " > " + out.string() + " 2> " + err.string();
  const int rc = std::system(cmd.c_str());
  RunResult result;
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string config_path(const char* leaf) {
  return (std::filesystem::path(MTILT_CONFIG_DIR) / leaf).string();
}

constexpr const char* kRatioHeader =
    "model,n,x,delta,estimator,N,seed,tail,stderr,normal_tail,ratio,"
    "ratio_stderr,env_lower,env_upper,flags";

}  // namespace

TEST_CASE("tail: exact enumeration result is printed verbatim") {
  const auto r =
      run_cli("tail --model rademacher --n 16 --x 2 --estimator enumeration");
  CHECK(r.status == 0);
  CHECK(r.err.empty());
  CHECK(r.out ==
        "upper tail at x=2: 0.01063538\n"
        "value = 0.0106353759765625\n"
        "stderr = 0\n"
        "log_value = -4.543569478198601\n"
        "lambda = 0  estimator = enumeration  N = 65536  seed = 0\n");
}

TEST_CASE("tail: the lower side counts the mirrored event") {
  const auto r = run_cli(
      "tail --model rademacher --n 16 --x 1 --side lower "
      "--estimator enumeration");
  CHECK(r.status == 0);
  CHECK(contains(r.out, "lower tail at x=1: 0.1050568"));
  CHECK(contains(r.out, "value = 0.1050567626953125"));
}

TEST_CASE("tail: worker count never changes the printed numbers") {
  const std::string args =
      "tail --model rademacher --n 64 --x 1.5 --N 20000 --seed 3";
  const auto one = run_cli(args, "MTILT_WORKERS=1");
  const auto eight = run_cli(args, "MTILT_WORKERS=8");
  const auto flagged = run_cli(args + " --workers 2");
  CHECK(one.status == 0);
  CHECK(one.out == eight.out);
  CHECK(one.out == flagged.out);
  CHECK(contains(one.out, "value = 0.05179173227349418"));
  CHECK(contains(one.out, "lambda = 1.5  estimator = importance"));
}

TEST_CASE("enumerate: plain and tilted path sums") {
  const auto plain = run_cli("enumerate --model rademacher --n 16 --x 2");
  CHECK(plain.status == 0);
  CHECK(contains(plain.out, "exact tail at x=2: 0.01063538"));
  CHECK(contains(plain.out, "value = 0.0106353759765625"));
  CHECK(contains(plain.out, "paths = 65536"));

  const auto tilted =
      run_cli("enumerate --model rademacher --n 16 --x 2 --lambda 1");
  CHECK(tilted.status == 0);
  CHECK(contains(tilted.out, "paths = 65536"));
}

TEST_CASE("check-conditions: all checks pass and the CSV mirrors them") {
  const auto csv_path = (work_dir() / "conditions.csv").string();
  const auto r = run_cli(
      "check-conditions --model rademacher --n 16 --epsilon 1 "
      "--bernstein-c 1 --csv " +
      csv_path);
  CHECK(r.status == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(contains(lines[0], "A1 "));
  CHECK(contains(lines[1], "A2 "));
  CHECK(contains(lines[2], "A1prime "));
  CHECK(contains(lines[3], "Bernstein "));
  CHECK(contains(lines[4], "Lemma31 "));
  for (const std::string& line : lines) CHECK(contains(line, "holds=yes"));

  const std::string csv = slurp(csv_path);
  const auto rows = lines_of(csv);
  REQUIRE(rows.size() >= 6);
  CHECK(rows[0] == "check,entry,measured,bound,holds");
  CHECK(rows[1] == "A1,overall,54.598150033144236,54.598150033144236,1");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].back() == '1');
  }
}

TEST_CASE("check-conditions: a failing bound exits 4 and skips Lemma31") {
  const auto r = run_cli("check-conditions --model rademacher --n 16 "
                         "--c0 1 --c1 2");
  CHECK(r.status == 4);
  CHECK(contains(r.out, "A1        measured=2.718281828459045 bound=2 "
                        "holds=no"));
  CHECK(contains(r.out, "Lemma31   skipped (needs A1 to hold)"));
}

TEST_CASE("exit codes distinguish validation, numerical and bound failures") {
  // Enumeration over a continuous-support model is a usage error.
  const auto unsupported =
      run_cli("enumerate --model truncated_gaussian --n 8 --x 1");
  CHECK(unsupported.status == 2);
  CHECK(contains(unsupported.err, "two-point conditional support"));

  // Path counts past the enumeration cap are a resource refusal.
  const auto too_big = run_cli("enumerate --model rademacher --n 30 --x 1");
  CHECK(too_big.status == 3);
  CHECK(contains(too_big.err, "n <= 24"));

  // A tilt outside the certified range is a numerical refusal.
  const auto hot = run_cli("tail --model rademacher --n 16 --x 1 "
                           "--lambda 100");
  CHECK(hot.status == 3);
  CHECK(contains(hot.err, "certified range"));

  // Unknown command-line flags fail at parse time.
  const auto bad_flag = run_cli("tail --badflag");
  CHECK(bad_flag.status == 2);

  // Unknown config keys are rejected before any work happens.
  const auto cfg = (work_dir() / "bad.json").string();
  {
    std::ofstream out(cfg);
    out << R"({"schema_version":1,"bogus":2})";
  }
  const auto bad_cfg = run_cli("tail --config " + cfg);
  CHECK(bad_cfg.status == 2);
  CHECK(contains(bad_cfg.err, "config: unknown key 'bogus' in top level"));
}

TEST_CASE("ratio: stdout equals the CSV file and reruns are byte identical") {
  const std::string args =
      "ratio --families rademacher --n-values 16 --x-values 0.5 "
      "--x-values 1 --estimator enumeration --seed 5";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);

  const auto rows = lines_of(first.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == kRatioHeader);
  CHECK(contains(rows[1], "rademacher,16,0.5,0,enumeration,65536,"));
  CHECK(contains(rows[1], ",0.2272491455078125,0,0.3085375387259869,"));
  CHECK(contains(rows[2], "lattice;lower"));

  const auto csv_path = (work_dir() / "ratio.csv").string();
  const auto filed = run_cli(args + " --csv " + csv_path);
  CHECK(filed.status == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(csv_path) == first.out);
}

TEST_CASE("ratio: series files carry the CSV values verbatim") {
  const std::string prefix = (work_dir() / "series").string();
  const std::string args =
      "ratio --families rademacher --n-values 16 --x-values 0.5 "
      "--x-values 1 --estimator enumeration --seed 5 --series-prefix " +
      prefix;
  const auto r = run_cli(args);
  CHECK(r.status == 0);

  const std::string upper = slurp(prefix + "_rademacher_n16.dat");
  const std::string lower = slurp(prefix + "_rademacher_n16_lower.dat");
  const auto upper_lines = lines_of(upper);
  REQUIRE(upper_lines.size() == 3);
  CHECK(upper_lines[0] == "# x ratio stderr lower upper");
  CHECK(lines_of(lower).size() == 3);

  // Every series number reappears verbatim in the CSV text.
  for (std::size_t i = 1; i < upper_lines.size(); ++i) {
    std::istringstream fields(upper_lines[i]);
    std::string field;
    while (fields >> field) {
      CAPTURE(field);
      CHECK(contains(r.out, field));
    }
  }
}

TEST_CASE("ratio: the lower sweep can be switched off") {
  const auto r = run_cli(
      "ratio --families rademacher --n-values 16 --x-values 1 "
      "--estimator enumeration --no-lower");
  CHECK(r.status == 0);
  REQUIRE(lines_of(r.out).size() == 2);
  CHECK(!contains(r.out, ";lower"));
}

TEST_CASE("config files configure runs and explicit flags win") {
  const auto cfg = (work_dir() / "tail.json").string();
  {
    std::ofstream out(cfg);
    out << R"({
  "schema_version": 1,
  "model": {"kind": "rademacher", "n": 8},
  "experiment": {"operation": "tail", "x": 2, "estimator": "enumeration"}
})";
  }
  const auto from_file = run_cli("tail --config " + cfg);
  CHECK(from_file.status == 0);
  CHECK(contains(from_file.out, "value = 0.03515625"));

  const auto overridden = run_cli("tail --config " + cfg + " --n 16");
  CHECK(overridden.status == 0);
  CHECK(contains(overridden.out, "value = 0.0106353759765625"));
}

TEST_CASE("JSON summary embeds metadata, the effective config and results") {
  const auto json_path = (work_dir() / "summary.json").string();
  const auto r = run_cli(
      "tail --model rademacher --n 16 --x 2 --estimator enumeration "
      "--json " +
      json_path);
  CHECK(r.status == 0);

  const auto doc = nlohmann::json::parse(slurp(json_path));
  CHECK(doc.at("metadata").at("tool") == "mtilt");
  CHECK(doc.at("metadata").at("version") == "1.0.0");
  CHECK(doc.at("config").at("model").at("n") == 16);
  CHECK(doc.at("config").at("experiment").at("operation") == "tail");
  CHECK(doc.at("results").at("x") == 2.0);
  CHECK(doc.at("results").at("side") == "upper");
  CHECK(doc.at("results").at("tail").at("value") == 0.0106353759765625);
  CHECK(doc.at("results").at("tail").at("estimator") == "enumeration");
}

TEST_CASE("mdp: the gap table is deterministic for a fixed seed") {
  const std::string args =
      "mdp --model rademacher --x 1 --beta 0.25 --n-values 100 "
      "--N 50000 --seed 2";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  CHECK(first.status == 0);
  CHECK(first.out == second.out);
  const auto rows = lines_of(first.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "n,a_n,threshold,value,target,gap,scaled_stderr,flags");
  CHECK(rows[1] ==
        "100,3.1622776601683795,3.1622776601683795,-0.7022348924951992,"
        "-0.5,0.20223489249519921,0.0008118192591903775,");
}

TEST_CASE("lemmas: sweep summary, pass verdict and KS series file") {
  const std::string prefix = (work_dir() / "lemmas").string();
  const auto r = run_cli(
      "lemmas --families rademacher --n-values 16 --lambda-values 0.5 "
      "--sampled-histories 8 --ks-n-values 16 --ks-lambda 0.5 "
      "--ks-replicates 20000 --seed 1 --series-prefix " +
      prefix);
  CHECK(r.status == 0);
  CHECK(contains(r.out, "drift rows = 1, cumulant rows = 1, ks rows = 1"));
  CHECK(contains(r.out, "max fitted c = 0.04140788661784356 (c_max = 2)"));
  CHECK(contains(r.out, "bounds hold"));

  const auto ks = lines_of(slurp(prefix + "_ks.csv"));
  REQUIRE(ks.size() == 2);
  CHECK(ks[0] == "model,n,lambda,N,ks,sampling_band,rhs_shape,fitted_c");
  CHECK(contains(ks[1], "rademacher,16,0.5,20000,"));
}

TEST_CASE("calibrate: prints the fitted envelope constant") {
  const auto r = run_cli(
      "calibrate --families rademacher --n-values 16 --x-values 1 "
      "--x-values 2 --estimator enumeration --seed 4");
  CHECK(r.status == 0);
  CHECK(r.out ==
        "calibrated envelope c = 0.25193072993600707 over 4 rows\n");
}

TEST_CASE("shipped config files drive their operations end to end") {
  // The shipped configs name relative output files; point every output at
  // the scratch directory so the runs stay self-contained.
  const std::string wd = work_dir().string() + "/ship";

  const auto ratio =
      run_cli("ratio --config " + config_path("ratio_scan_default.json") +
              " --families rademacher --n-values 16 --x-values 1 "
              "--estimator enumeration --no-lower --csv " +
              wd + "_ratio.csv --json " + wd + "_ratio.json --series-prefix " +
              wd + "_ratio --svg " + wd + "_ratio.svg");
  CHECK(ratio.status == 0);
  CHECK(contains(slurp(wd + "_ratio.csv"), kRatioHeader));
  CHECK(contains(slurp(wd + "_ratio.svg"), "</svg>"));

  const auto mdp = run_cli("mdp --config " + config_path("mdp_default.json") +
                           " --n-values 100 --N 20000 --csv " + wd +
                           "_mdp.csv --json " + wd +
                           "_mdp.json --series-prefix " + wd + "_mdp --svg " +
                           wd + "_mdp.svg");
  CHECK(mdp.status == 0);
  CHECK(contains(slurp(wd + "_mdp.csv"), "n,a_n,threshold,value,target,gap"));

  const auto lemmas =
      run_cli("lemmas --config " + config_path("lemmas_default.json") +
              " --n-values 16 --lambda-values 0.5 --sampled-histories 8 "
              "--ks-n-values 64 --ks-replicates 20000 --csv " +
              wd + "_lemmas.csv --json " + wd + "_lemmas.json "
              "--series-prefix " + wd + "_lemmas");
  CHECK(lemmas.status == 0);
  CHECK(contains(lemmas.out, "bounds hold"));
  CHECK(contains(slurp(wd + "_lemmas.csv"),
                 "table,model,n,lambda,lhs,rhs_shape,fitted_c,pass"));
}

TEST_CASE("help text lists every subcommand and exits cleanly") {
  const auto r = run_cli("--help");
  CHECK(r.status == 0);
  for (const char* name : {"check-conditions", "tail", "enumerate", "ratio",
                           "lemmas", "mdp", "calibrate"}) {
    CAPTURE(name);
    CHECK(contains(r.out, name));
  }
}
