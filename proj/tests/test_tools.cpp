#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "mtilt/errors.hpp"

#include "config.hpp"
#include "emit.hpp"

using mtilt::cli::Config;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json minimal_doc() { return json{{"schema_version", 1}}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::filesystem::path fresh_dir(const char* leaf) {
  const auto dir = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

double reparse(const std::string& text) {
  return std::strtod(text.c_str(), nullptr);
}

mtilt::ScanRow pinned_scan_row(bool lower) {
  mtilt::ScanRow row;
  row.model = "rademacher";
  row.n = 16;
  row.x = 2.0;
  row.delta = 0.1;
  row.estimator = mtilt::EstimatorKind::kEnumeration;
  row.replicates = 65536;
  row.seed = 7;
  row.tail = 0.25;
  row.std_error = 0.0;
  row.normal_tail_value = 0.5;
  row.ratio = 0.5;
  row.ratio_std_error = 0.0;
  row.env_lower = 0.25;
  row.env_upper = 4.0;
  row.flags = {"lattice"};
  if (lower) row.flags.push_back("lower");
  return row;
}

}  // namespace

TEST_CASE("config: defaults from a minimal document") {
  const Config config = mtilt::cli::parse_config(minimal_doc());
  CHECK(config.model.kind == "rademacher");
  CHECK(config.model.n == 16);
  CHECK(config.model.spike_weight == 0.0625);
  CHECK(config.constants.c0 == -1.0);  // resolve from the model
  CHECK(config.constants.alpha0 == 1.0);
  CHECK(config.constants.c == 2.0);
  CHECK(config.experiment.operation == "ratio");
  CHECK(config.experiment.estimator == "importance");
  CHECK(config.experiment.lambda_mode == "proxy");
  CHECK_FALSE(config.experiment.has_lambda);
  CHECK_FALSE(config.experiment.has_epsilon);
  CHECK_FALSE(config.experiment.has_bernstein_c);
  CHECK(config.experiment.include_lower);
  CHECK(config.experiment.k_max == 12);
  CHECK(config.experiment.ks_lambda == 1.0);
  CHECK(config.execution.replicates == 100000);
  CHECK(config.execution.seed == 1);
  CHECK(config.execution.workers == 0);
  CHECK(config.output.csv.empty());
}

TEST_CASE("config: parse, dump and parse again is the identity") {
  json doc = minimal_doc();
  doc["model"] = {{"kind", "bernstein_mixture"}, {"n", 128}, {"spike", 5.0}};
  doc["constants"] = {{"c0", 1.0}, {"alpha0", 0.5}};
  doc["experiment"] = {{"operation", "mdp"},
                       {"x", 1.5},
                       {"lambda", 2.25},
                       {"beta", 0.3},
                       {"epsilon", nullptr},
                       {"families", json::array({"rademacher"})},
                       {"n_values", json::array({8, 64})},
                       {"include_lower", false}};
  doc["execution"] = {{"N", 5000}, {"seed", 99}, {"workers", 2}};
  doc["output"] = {{"csv", "out.csv"}, {"svg", "out.svg"}};

  const Config once = mtilt::cli::parse_config(doc);
  CHECK(once.experiment.has_lambda);
  CHECK(once.experiment.lambda == 2.25);
  CHECK_FALSE(once.experiment.has_epsilon);
  CHECK(once.model.spike == 5.0);
  CHECK(once.model.cutoff == 3.0);  // untouched default
  CHECK_FALSE(once.experiment.include_lower);

  const json dumped = mtilt::cli::dump_config(once);
  const Config twice = mtilt::cli::parse_config(dumped);
  CHECK(twice == once);
  // Dumping the reparsed config reproduces the same bytes.
  CHECK(mtilt::cli::dump_config(twice).dump() == dumped.dump());
  // Absent optionals serialize as null.
  CHECK(dumped.at("experiment").at("epsilon").is_null());
  CHECK(dumped.at("experiment").at("bernstein_c").is_null());
  CHECK(dumped.at("experiment").at("lambda").get<double>() == 2.25);
}

TEST_CASE("config: schema version is mandatory and exact") {
  json doc;
  doc["model"] = {{"n", 8}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);

  doc = minimal_doc();
  doc["schema_version"] = 2;
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc["schema_version"] = "1";
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc["schema_version"] = 1.5;
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
}

TEST_CASE("config: unknown keys are rejected at every level") {
  json doc = minimal_doc();
  doc["bogus"] = json::object();
  CHECK_THROWS_WITH_AS(mtilt::cli::parse_config(doc),
                       "config: unknown key 'bogus' in top level",
                       mtilt::InvalidInputError);

  doc = minimal_doc();
  doc["model"] = {{"speed", 3}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["constants"] = {{"c2", 1.0}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["experiment"] = {{"mode", "fast"}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["execution"] = {{"threads", 4}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["output"] = {{"format", "csv"}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["model"] = json::array({1, 2});
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
}

TEST_CASE("config: wrong value types are rejected with the offending key") {
  json doc = minimal_doc();
  doc["model"] = {{"n", "sixteen"}};
  CHECK_THROWS_WITH_AS(mtilt::cli::parse_config(doc),
                       "config: bad value for 'n'", mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["experiment"] = {{"families", 3}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["experiment"] = {{"lambda", "big"}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
  doc = minimal_doc();
  doc["execution"] = {{"seed", json::array()}};
  CHECK_THROWS_AS(mtilt::cli::parse_config(doc), mtilt::InvalidInputError);
}

TEST_CASE("config: file loading") {
  const auto dir = fresh_dir("mtilt_config_test");
  const auto path = (dir / "config.json").string();
  {
    std::ofstream out(path);
    out << R"({"schema_version": 1, "model": {"kind": "truncated_gaussian", "n": 32}})";
  }
  const Config config = mtilt::cli::load_config(path);
  CHECK(config.model.kind == "truncated_gaussian");
  CHECK(config.model.n == 32);

  CHECK_THROWS_AS(mtilt::cli::load_config((dir / "absent.json").string()),
                  mtilt::InvalidInputError);

  const auto broken = (dir / "broken.json").string();
  {
    std::ofstream out(broken);
    out << "{not json";
  }
  CHECK_THROWS_AS(mtilt::cli::load_config(broken), mtilt::InvalidInputError);
}

TEST_CASE("format_double: shortest strings that restore the exact bits") {
  CHECK(mtilt::cli::format_double(1.0) == "1");
  CHECK(mtilt::cli::format_double(0.5) == "0.5");
  CHECK(mtilt::cli::format_double(0.0) == "0");
  CHECK(mtilt::cli::format_double(-0.0) == "-0");
  CHECK(mtilt::cli::format_double(0.1) == "0.1");

  const std::vector<double> values = {
      1.0 / 3.0,      697.0 / 65536.0,        0.02275013194817921,
      3.141592653589793, 1e300,               5e-324,
      -2.5e-7,        2.2250738585072014e-308, 123456789.0,
      -0.4674863425314635};
  for (double v : values) {
    CAPTURE(v);
    const std::string text = mtilt::cli::format_double(v);
    CHECK(reparse(text) == v);
  }
}

TEST_CASE("ratio CSV: pinned schema and exact rows") {
  const std::vector<mtilt::ScanRow> rows = {pinned_scan_row(false),
                                            pinned_scan_row(true)};
  const std::string csv = mtilt::cli::ratio_csv(rows);
  const std::string expected =
      "model,n,x,delta,estimator,N,seed,tail,stderr,normal_tail,ratio,"
      "ratio_stderr,env_lower,env_upper,flags\n"
      "rademacher,16,2,0.1,enumeration,65536,7,0.25,0,0.5,0.5,0,0.25,4,"
      "lattice\n"
      "rademacher,16,2,0.1,enumeration,65536,7,0.25,0,0.5,0.5,0,0.25,4,"
      "lattice;lower\n";
  CHECK(csv == expected);
  CHECK(csv.compare(0, std::string(mtilt::cli::kRatioCsvHeader).size(),
                    mtilt::cli::kRatioCsvHeader) == 0);

  CHECK(mtilt::cli::ratio_csv({}) ==
        std::string(mtilt::cli::kRatioCsvHeader) + "\n");
}

TEST_CASE("bound, KS and MDP CSV emitters") {
  mtilt::BoundRow bound;
  bound.model = "rademacher";
  bound.n = 4;
  bound.lambda = 1.0;
  bound.lhs = 0.125;
  bound.rhs_shape = 0.5;
  bound.fitted_c = 0.25;
  bound.pass = true;
  const std::vector<mtilt::BoundRow> bounds = {bound};
  CHECK(mtilt::cli::bound_csv(bounds) ==
        "model,n,lambda,lhs,rhs_shape,fitted_c,pass\n"
        "rademacher,4,1,0.125,0.5,0.25,1\n");

  mtilt::KsRow ks;
  ks.model = "rademacher";
  ks.n = 256;
  ks.lambda = 2.0;
  ks.replicates = 100000;
  ks.ks = 0.03125;
  ks.sampling_band = 0.004;
  ks.rhs_shape = 0.5;
  ks.fitted_c = 0.0625;
  const std::vector<mtilt::KsRow> kss = {ks};
  CHECK(mtilt::cli::ks_csv(kss) ==
        "model,n,lambda,N,ks,sampling_band,rhs_shape,fitted_c\n"
        "rademacher,256,2,100000,0.03125,0.004,0.5,0.0625\n");

  mtilt::MdpRow alive;
  alive.n = 100;
  alive.a_n = 2.0;
  alive.threshold = 2.0;
  alive.value = -0.5625;
  alive.target = -0.5;
  alive.gap = 0.0625;
  alive.scaled_std_error = 0.015625;
  mtilt::MdpRow dead = alive;
  dead.n = 10000;
  dead.value = -kInf;
  dead.gap = kInf;
  dead.scaled_std_error = kInf;
  dead.no_hits = true;
  const std::vector<mtilt::MdpRow> mdp = {alive, dead};
  CHECK(mtilt::cli::mdp_csv(mdp) ==
        "n,a_n,threshold,value,target,gap,scaled_stderr,flags\n"
        "100,2,2,-0.5625,-0.5,0.0625,0.015625,\n"
        "10000,2,2,-inf,-0.5,inf,inf,no_hits\n");
}

TEST_CASE("conditions CSV: overall row plus one row per detail entry") {
  mtilt::ConditionReport report;
  report.condition = mtilt::ConditionName::kA2;
  report.measured = 0.01;
  report.bound = 0.0625;
  report.holds = true;
  report.detail = {{"history=0", 0.0, 0.0625}, {"history=0.25", 0.01, 0.0625}};
  const std::vector<std::pair<std::string, mtilt::ConditionReport>> reports = {
      {"A2", report}};
  CHECK(mtilt::cli::conditions_csv(reports) ==
        "check,entry,measured,bound,holds\n"
        "A2,overall,0.01,0.0625,1\n"
        "A2,history=0,0,0.0625,1\n"
        "A2,history=0.25,0.01,0.0625,1\n");
}

TEST_CASE("ratio series files: one per model, horizon and side") {
  const auto dir = fresh_dir("mtilt_series_test");
  const std::string prefix = (dir / "scan").string();

  auto first = pinned_scan_row(false);
  first.x = 1.0;
  first.ratio = 0.75;
  auto second = pinned_scan_row(false);
  second.x = 2.0;
  auto lower = pinned_scan_row(true);
  const std::vector<mtilt::ScanRow> rows = {first, second, lower};

  const auto written = mtilt::cli::write_ratio_series(prefix, rows);
  const std::vector<std::string> expected_paths = {
      prefix + "_rademacher_n16.dat", prefix + "_rademacher_n16_lower.dat"};
  CHECK(written == expected_paths);
  CHECK(read_file(written[0]) ==
        "# x ratio stderr lower upper\n"
        "1 0.75 0 0.25 4\n"
        "2 0.5 0 0.25 4\n");
  CHECK(read_file(written[1]) ==
        "# x ratio stderr lower upper\n"
        "2 0.5 0 0.25 4\n");

  const auto empty = mtilt::cli::write_ratio_series(prefix + "_none", {});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0] == prefix + "_none.dat");
  CHECK(read_file(empty[0]) == "# x ratio stderr lower upper\n");
}

TEST_CASE("mdp series file") {
  const auto dir = fresh_dir("mtilt_mdp_series_test");
  const std::string prefix = (dir / "mdp").string();
  mtilt::MdpRow a;
  a.n = 100;
  a.gap = 0.25;
  mtilt::MdpRow b;
  b.n = 1000;
  b.gap = 0.125;
  const std::vector<mtilt::MdpRow> rows = {a, b};
  const auto written = mtilt::cli::write_mdp_series(prefix, rows);
  REQUIRE(written.size() == 1);
  CHECK(written[0] == prefix + ".dat");
  CHECK(read_file(written[0]) ==
        "# n gap\n"
        "100 0.25\n"
        "1000 0.125\n");
}

TEST_CASE("SVG charts are self-contained and finite") {
  auto first = pinned_scan_row(false);
  first.x = 1.0;
  auto second = pinned_scan_row(false);
  second.x = 2.0;
  const std::vector<mtilt::ScanRow> rows = {first, second};
  const std::string svg = mtilt::cli::ratio_svg(rows);
  CHECK(svg.substr(0, 4) == "<svg");
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("rademacher n=16") != std::string::npos);
  CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);  // no external references
  CHECK(svg.find("inf") == std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);

  mtilt::MdpRow alive;
  alive.n = 100;
  alive.gap = 0.25;
  mtilt::MdpRow dead;
  dead.n = 1000;
  dead.gap = kInf;  // non-finite points are skipped, not emitted
  const std::vector<mtilt::MdpRow> mdp = {alive, dead};
  const std::string chart = mtilt::cli::mdp_svg(mdp);
  CHECK(chart.find("log10 n") != std::string::npos);
  CHECK(chart.find("inf") == std::string::npos);
  CHECK(chart.find("nan") == std::string::npos);
}

TEST_CASE("summary JSON: metadata, config echo, results passthrough") {
  const Config config = mtilt::cli::parse_config(minimal_doc());
  json results;
  results["tail"] = 0.25;
  const json doc = mtilt::cli::summary_json(config, results);

  CHECK(doc.at("metadata").at("tool") == "mtilt");
  CHECK(doc.at("metadata").at("version") == "1.0.0");
  const std::string stamp = doc.at("metadata").at("timestamp");
  REQUIRE(stamp.size() == 20);
  CHECK(stamp[4] == '-');
  CHECK(stamp[7] == '-');
  CHECK(stamp[10] == 'T');
  CHECK(stamp[13] == ':');
  CHECK(stamp[16] == ':');
  CHECK(stamp[19] == 'Z');
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u,
                        17u, 18u}) {
    CHECK(std::isdigit(static_cast<unsigned char>(stamp[i])));
  }
  CHECK(doc.at("config") == mtilt::cli::dump_config(config));
  CHECK(doc.at("results").at("tail") == 0.25);
}

TEST_CASE("text file writing") {
  const auto dir = fresh_dir("mtilt_write_test");
  const std::string path = (dir / "out.txt").string();
  mtilt::cli::write_text_file(path, "alpha\nbeta\n");
  CHECK(read_file(path) == "alpha\nbeta\n");
  CHECK_THROWS_AS(
      mtilt::cli::write_text_file("/nonexistent_dir_mtilt/x.txt", "y"),
      mtilt::ResourceError);
}
