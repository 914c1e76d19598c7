#include "cli/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace perpetua::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(PERPETUA_CONFIG_DIR) + "/" + name; }

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "perpetua_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("analyze reports existence, moments and abscissa") {
  const Run r = run({"analyze", config("gamma.json"), "--p", "1", "--p", "2"});
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["existence"]["verdict"] == "converges-a.s.");
  CHECK(j["existence"]["integral"]["method"] == "analytic");
  REQUIRE(j["moments"].size() == 2);
  CHECK(j["moments"][0]["finite"] == true);
  CHECK(j["moments"][1]["finite"] == true);
  CHECK(j["abscissa"]["regime"] == "all-contracting");
  CHECK(j["abscissa"]["r_z"] == 1.0);
  CHECK(j["sample_summary"].is_null());
}

TEST_CASE("analyze with samples") {
  const Run r = run({"analyze", config("gamma.json"), "--n", "2000", "--check-fixed-point"});
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sample_summary"]["n"] == 2000);
  CHECK(j["sample_summary"]["fixed_point_residual"].get<double>() < 0.1);
  CHECK(j["sample_summary"]["cf_decay"]["method"] == "heuristic");
}

TEST_CASE("unit multiplier diverges and refuses moments") {
  const Run r = run({"analyze", config("unit_multiplier.json"), "--p", "1"});
  REQUIRE(r.code == kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["existence"]["verdict"] == "diverges-in-probability");
  CHECK(j["moments"][0].contains("refused"));
  CHECK(j["abscissa"].contains("refused"));
  CHECK(run({"analyze", config("unit_multiplier.json"), "--n", "10"}).code == kNonConvergent);
  CHECK(run({"simulate", config("unit_multiplier.json"), "--n", "10"}).code == kNonConvergent);
  CHECK(run({"simulate", config("log_pareto.json"), "--n", "10"}).code == kNonConvergent);
}

TEST_CASE("config errors name the offending path") {
  const std::string missing_q = write_file(
      "missing_q.json",
      R"({"coupling": "independent", "M": {"family": "point_mass", "params": {"c": 0.5}}})");
  Run r = run({"analyze", missing_q});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("config.Q: required") != std::string::npos);

  const std::string bad_family = write_file(
      "bad_family.json",
      R"({"coupling": "independent", "M": {"family": "zeta", "params": {}}, "Q": {"family": "point_mass", "params": {"c": 1}}})");
  r = run({"analyze", bad_family});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("config.M.family: unknown family 'zeta'") != std::string::npos);

  const std::string bad_param = write_file(
      "bad_param.json",
      R"({"coupling": "independent", "M": {"family": "beta", "params": {"alpha": -1, "beta": 1}}, "Q": {"family": "point_mass", "params": {"c": 1}}})");
  r = run({"analyze", bad_param});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("config.M.params") != std::string::npos);

  const std::string malformed = write_file("malformed.json", "{ not json");
  r = run({"analyze", malformed});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("malformed JSON") != std::string::npos);

  CHECK(run({"analyze", (scratch() / "absent.json").string()}).code == kUsage);
  CHECK(run({"frobnicate"}).code == kUsage);
  CHECK(run({}).code == kUsage);
}

TEST_CASE("simulate writes deterministic CSV") {
  const fs::path a = scratch() / "a.csv";
  const fs::path b = scratch() / "b.csv";
  Run r1 = run({"simulate", config("geometric.json"), "--n", "5000", "--seed", "42", "--out", a.string()});
  Run r2 = run({"simulate", config("geometric.json"), "--n", "5000", "--seed", "42", "--out", b.string()});
  REQUIRE(r1.code == kOk);
  REQUIRE(r2.code == kOk);
  const std::string csv = read_file(a);
  CHECK(csv == read_file(b));
  CHECK(csv.rfind("z\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5001);
  const auto summary = nlohmann::json::parse(r1.out);
  CHECK(summary["n"] == 5000);
  CHECK(summary["provenance"]["exact_count"] == 5000);

  setenv("PERPETUA_THREADS", "1", 1);
  const Run serial = run({"simulate", config("geometric.json"), "--n", "5000", "--seed", "42"});
  unsetenv("PERPETUA_THREADS");
  CHECK(serial.out == csv);
}

TEST_CASE("simulate edge cases") {
  const Run empty = run({"simulate", config("gamma.json"), "--n", "0"});
  CHECK(empty.code == kOk);
  CHECK(empty.out == "z\n");
  CHECK(nlohmann::json::parse(empty.err)["n"] == 0);

  const Run fp = run({"simulate", config("gamma.json"), "--n", "5000", "--check-fixed-point",
                      "--out", (scratch() / "fp.csv").string()});
  CHECK(fp.code == kOk);
  CHECK(nlohmann::json::parse(fp.out)["fixed_point_residual"].get<double>() < 0.05);

  const Run exhausted = run({"simulate", config("gamma.json"), "--n", "200", "--max-terms", "2"});
  CHECK(exhausted.code == kTruncation);

  CHECK(run({"simulate", config("gamma.json"), "--n", "10", "--epsilon", "2"}).code == kUsage);
  CHECK(run({"simulate", config("gamma.json")}).code == kUsage);
}

TEST_CASE("csv values round-trip") {
  const Run r = run({"simulate", config("gamma.json"), "--n", "50"});
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "z");
  const auto outcomes = perpetua::draw_batch(perpetua::PerpetuitySampler(load_config(config("gamma.json"))), 50);
  for (const auto& o : outcomes) {
    REQUIRE(std::getline(lines, line));
    CHECK(std::stod(line) == o.value);
  }
}

TEST_CASE("verify") {
  Run r = run({"verify", "abscissa-boundary"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  r = run({"verify", "pitman-yor", "--json"});
  CHECK(r.code == kOk);
  CHECK(nlohmann::json::parse(r.out)["pass"] == true);
  r = run({"verify", "bogus"});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("abscissa-boundary") != std::string::npos);
}

TEST_CASE("worker cap") {
  setenv("PERPETUA_THREADS", "1", 1);
  CHECK(worker_cap() == 1);
  setenv("PERPETUA_THREADS", "junk", 1);
  CHECK(worker_cap() >= 1);
  unsetenv("PERPETUA_THREADS");
}
