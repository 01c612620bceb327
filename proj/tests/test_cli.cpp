#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

/// Runs the CLI under test against scratch directories. Every case bails out
/// quietly when TRACKER_CLI_BIN is absent (running the unit binary by hand).
std::string cli_bin() {
  const char* v = std::getenv("TRACKER_CLI_BIN");
  return v ? std::string(v) : std::string();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "tracker_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  CliResult r;
  fs::path out_file = scratch / "stdout.txt";
  fs::path err_file = scratch / "stderr.txt";
  std::string cmd = "\"" + cli_bin() + "\" " + args + " > \"" + out_file.string() +
                    "\" 2> \"" + err_file.string() + "\"";
  int status = std::system(cmd.c_str());
  if (status != -1 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

/// Two-epoch run on a small horizon; quick and constraint-clean.
std::string base_config(const std::string& family, const std::string& extra = "") {
  return
      "{\n"
      "  \"profile\": {\"t\": 2000, \"transitions\": [1, 1001, 2000], \"means\": [0.8, 0.4]},\n"
      "  \"params\": {\"gamma0\": 0.8, \"gamma\": 0.5, \"beta\": 0.1, \"delta\": 0.4,\n"
      "              \"b\": 0.05, \"mu0\": 0.3},\n"
      "  \"family\": {\"kind\": \"" + family + "\"},\n"
      "  \"estimator\": \"recursive\",\n"
      "  \"trials\": 20,\n"
      "  \"seed\": 7" + extra + "\n"
      "}\n";
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

/// Field of the first data row under the named header column.
std::string csv_cell(const std::string& body, const std::string& column, std::size_t row = 1) {
  std::istringstream in(body);
  std::string header_line;
  std::getline(in, header_line);
  std::vector<std::string> header = split_csv_line(header_line);
  std::string line;
  for (std::size_t i = 0; i < row; ++i)
    if (!std::getline(in, line)) return "";
  std::vector<std::string> fields = split_csv_line(line);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == column) return i < fields.size() ? fields[i] : "";
  return "";
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("simulate writes its artifacts and succeeds on a valid config") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("simulate_ok");
  write_file(dir / "cfg.json", base_config("bernoulli"));
  CliResult r = run_cli("simulate --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                            (dir / "run").string() + "\" --debug-path",
                        dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("simulate:") != std::string::npos);
  CHECK(fs::exists(dir / "run" / "trace.csv"));
  CHECK(fs::exists(dir / "run" / "good_event.json"));
  CHECK(fs::exists(dir / "run" / "manifest.json"));
  CHECK(fs::exists(dir / "run" / "path.csv"));
  CHECK(line_count(slurp(dir / "run" / "path.csv")) == 2001);

  std::string trace = slurp(dir / "run" / "trace.csv");
  CHECK(trace.rfind("l,round,estimate,epoch,mean,abs_dev,rel_dev,in_warmup\n", 0) == 0);

  nlohmann::json rep = nlohmann::json::parse(slurp(dir / "run" / "good_event.json"));
  CHECK(rep.contains("good"));
  CHECK(rep.contains("samples_observed"));
  CHECK(rep.contains("first_violation"));
  CHECK(rep["sample_budget_ok"].get<bool>());

  nlohmann::json man = nlohmann::json::parse(slurp(dir / "run" / "manifest.json"));
  CHECK(man["command"] == "simulate");
  CHECK(man["seed"].get<std::uint64_t>() == 7);
  CHECK(man["outputs"].contains("trace.csv"));
}

TEST_CASE("simulate is byte-reproducible and responds to seed overrides") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("simulate_repro");
  write_file(dir / "cfg.json", base_config("bernoulli"));
  std::string cfg = (dir / "cfg.json").string();
  CliResult r1 =
      run_cli("simulate --config \"" + cfg + "\" --out \"" + (dir / "a").string() + "\"", dir);
  CliResult r2 =
      run_cli("simulate --config \"" + cfg + "\" --out \"" + (dir / "b").string() + "\"", dir);
  CliResult r3 = run_cli("simulate --config \"" + cfg + "\" --out \"" +
                             (dir / "c").string() + "\" --seed 99",
                         dir);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  REQUIRE(r3.exit_code == 0);

  std::string a = slurp(dir / "a" / "trace.csv");
  CHECK(a == slurp(dir / "b" / "trace.csv"));
  CHECK(a != slurp(dir / "c" / "trace.csv"));

  nlohmann::json ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  nlohmann::json mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(ma["outputs"] == mb["outputs"]);
  nlohmann::json mc = nlohmann::json::parse(slurp(dir / "c" / "manifest.json"));
  CHECK(ma["outputs"]["trace.csv"] != mc["outputs"]["trace.csv"]);
  CHECK(mc["seed"].get<std::uint64_t>() == 99);
}

TEST_CASE("simulate rejects configs that break the exponent chain") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("simulate_bad_delta");
  std::string cfg = base_config("bernoulli");
  std::size_t pos = cfg.find("\"delta\": 0.4");
  REQUIRE(pos != std::string::npos);
  cfg.replace(pos, 12, "\"delta\": 0.9");
  write_file(dir / "cfg.json", cfg);
  CliResult r = run_cli("simulate --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                            (dir / "run").string() + "\"",
                        dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("delta < (gamma-beta)/(1-beta)") != std::string::npos);
}

TEST_CASE("config loading fails closed") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("config_fail_closed");

  CliResult missing = run_cli("simulate --config \"" + (dir / "nope.json").string() +
                                  "\" --out \"" + (dir / "r1").string() + "\"",
                              dir);
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("cannot read config file") != std::string::npos);

  write_file(dir / "garbage.json", "this is not json {{{");
  CliResult garbage = run_cli("simulate --config \"" + (dir / "garbage.json").string() +
                                  "\" --out \"" + (dir / "r2").string() + "\"",
                              dir);
  CHECK(garbage.exit_code == 2);
  CHECK(garbage.err.find("not valid JSON") != std::string::npos);

  write_file(dir / "extra.json", base_config("bernoulli", ",\n  \"surprise\": 1"));
  CliResult extra = run_cli("simulate --config \"" + (dir / "extra.json").string() +
                                "\" --out \"" + (dir / "r3").string() + "\"",
                            dir);
  CHECK(extra.exit_code == 2);
  CHECK(extra.err.find("unknown key \"surprise\"") != std::string::npos);

  CliResult no_sub = run_cli("", dir);
  CHECK(no_sub.exit_code == 2);
}

TEST_CASE("mc reports a perfect pass rate for constant rewards") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("mc_constant");
  write_file(dir / "cfg.json", base_config("constant"));
  CliResult r = run_cli("mc --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                            (dir / "run").string() + "\" --per-trial",
                        dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("mc:") != std::string::npos);

  std::string summary = slurp(dir / "run" / "summary.csv");
  CHECK(line_count(summary) == 2);
  CHECK(csv_cell(summary, "p_hat") == "1");
  CHECK(csv_cell(summary, "good") == "20");
  CHECK(csv_cell(summary, "trials") == "20");
  CHECK(csv_cell(summary, "family") == "constant");
  CHECK(csv_cell(summary, "fail_tracking") == "0");

  std::string per_trial = slurp(dir / "run" / "per_trial.csv");
  CHECK(line_count(per_trial) == 21);
  CHECK(csv_cell(per_trial, "good", 20) == "1");
}

TEST_CASE("mc sweeps write one row per axis value") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("mc_sweep");
  write_file(dir / "cfg.json", base_config("bernoulli"));
  std::string cfg = (dir / "cfg.json").string();
  CliResult r = run_cli("mc --config \"" + cfg + "\" --out \"" + (dir / "run").string() +
                            "\" --axis t --values 1000,2000",
                        dir);
  REQUIRE(r.exit_code == 0);
  std::string summary = slurp(dir / "run" / "summary.csv");
  CHECK(line_count(summary) == 3);
  CHECK(csv_cell(summary, "axis", 1) == "t");
  CHECK(csv_cell(summary, "value", 1) == "1000");
  CHECK(csv_cell(summary, "t", 1) == "1000");
  CHECK(csv_cell(summary, "t", 2) == "2000");
  CHECK(csv_cell(summary, "skipped", 1) == "0");
  CHECK(csv_cell(summary, "skipped", 2) == "0");

  CliResult bad_axis = run_cli("mc --config \"" + cfg + "\" --out \"" +
                                   (dir / "r2").string() + "\" --axis q --values 1",
                               dir);
  CHECK(bad_axis.exit_code == 2);
  CHECK(bad_axis.err.find("unknown sweep axis") != std::string::npos);

  CliResult no_values = run_cli(
      "mc --config \"" + cfg + "\" --out \"" + (dir / "r3").string() + "\" --axis t", dir);
  CHECK(no_values.exit_code == 2);

  CliResult clash = run_cli("mc --config \"" + cfg + "\" --out \"" + (dir / "r4").string() +
                                "\" --axis t --values 1000 --per-trial",
                            dir);
  CHECK(clash.exit_code == 2);
  CHECK(clash.err.find("--per-trial") != std::string::npos);
}

TEST_CASE("bounds tables cover success, failure rows and flag validation") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("bounds_tables");

  CliResult empty = run_cli("bounds --out \"" + (dir / "r0").string() + "\"", dir);
  CHECK(empty.exit_code == 0);
  CHECK(line_count(slurp(dir / "r0" / "bounds.csv")) == 1);
  CHECK_FALSE(fs::exists(dir / "r0" / "success.csv"));

  CliResult table = run_cli("bounds --out \"" + (dir / "r1").string() +
                                "\" --eps 0.5,0.6 --mean-sum 16 --ev 3 --lambda-sq 3",
                            dir);
  REQUIRE(table.exit_code == 0);
  std::string body = slurp(dir / "r1" / "bounds.csv");
  // Two eps values over one unweighted and one weighted target: four rows.
  CHECK(line_count(body) == 5);
  CHECK(body.find("0.73575888234288467") != std::string::npos);  // 2/e at eps = 1/2
  CHECK(body.find("eps must lie in (0, 1/2]") != std::string::npos);  // eps = 0.6 row

  CliResult success = run_cli("bounds --out \"" + (dir / "r2").string() +
                                  "\" --success-t 1000,1000000 --beta 0.2 --gamma 0.6 --b "
                                  "0.05 --exponent gap",
                              dir);
  REQUIRE(success.exit_code == 0);
  std::string sbody = slurp(dir / "r2" / "success.csv");
  CHECK(line_count(sbody) == 3);
  CHECK(csv_cell(sbody, "clamped", 2) == "1");

  CliResult bad_exp = run_cli("bounds --out \"" + (dir / "r3").string() +
                                  "\" --success-t 1000 --exponent both",
                              dir);
  CHECK(bad_exp.exit_code == 2);

  CliResult ragged = run_cli(
      "bounds --out \"" + (dir / "r4").string() + "\" --ev 1,2 --lambda-sq 1", dir);
  CHECK(ragged.exit_code == 2);
  CHECK(ragged.err.find("same number of values") != std::string::npos);
}

TEST_CASE("bandit needs its config section and writes both reports") {
  if (cli_bin().empty()) return;
  fs::path dir = fresh_dir("bandit_cli");

  write_file(dir / "plain.json", base_config("constant"));
  CliResult no_section = run_cli("bandit --config \"" + (dir / "plain.json").string() +
                                     "\" --out \"" + (dir / "r0").string() + "\"",
                                 dir);
  CHECK(no_section.exit_code == 2);
  CHECK(no_section.err.find("bandit") != std::string::npos);

  std::string bandit_extra =
      ",\n  \"bandit\": {\"horizon\": 2000, \"arms\": ["
      "{\"transitions\": [1, 1001, 2000], \"means\": [0.9, 0.1]},"
      "{\"transitions\": [1, 1001, 2000], \"means\": [0.1, 0.9]}]}";
  write_file(dir / "cfg.json", base_config("constant", bandit_extra));
  CliResult r = run_cli("bandit --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
                            (dir / "run").string() + "\"",
                        dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("bandit:") != std::string::npos);

  std::string body = slurp(dir / "run" / "bandit.csv");
  CHECK(line_count(body) == 2001);
  CHECK(body.rfind("round,chosen,explored,reward,best,regret,cum_regret,est_0,est_1\n", 0) ==
        0);

  std::string latch = slurp(dir / "run" / "latch.csv");
  CHECK(line_count(latch) == 2);
  CHECK(csv_cell(latch, "transition_round") == "1001");
  CHECK(csv_cell(latch, "best_changed") == "1");
  CHECK(csv_cell(latch, "new_best") == "1");
  CHECK(csv_cell(latch, "latched") == "1");

  CliResult again = run_cli("bandit --config \"" + (dir / "cfg.json").string() +
                                "\" --out \"" + (dir / "again").string() + "\"",
                            dir);
  REQUIRE(again.exit_code == 0);
  CHECK(slurp(dir / "again" / "bandit.csv") == body);
}

TEST_SUITE_END();
