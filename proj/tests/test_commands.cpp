#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "mmdpath/commands.hpp"
#include "mmdpath/scenario.hpp"

using namespace mmdpath;
using commands::RunConfig;
using testutil::fixture;
using testutil::read_file;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mmdpath_cmd_" + name)).string();
}

RunConfig toy_analyze_config(const std::string& out) {
  RunConfig config;
  config.target_design = fixture("golden/toy_target_design.csv");
  config.target_outcome = fixture("toy_target_outcome.csv");
  config.external_design = fixture("golden/toy_external_design.csv");
  config.external_metabolite = fixture("toy_external_metabolite.csv");
  config.out = out;
  config.seed = 42;
  return config;
}

}  // namespace

TEST_CASE("clr command reproduces the checked-in golden designs") {
  std::ostringstream err;
  for (const char* which : {"target", "external"}) {
    RunConfig config;
    config.input = fixture(std::string("toy_") + which + "_abundance.csv");
    config.out = temp_path(std::string("clr_") + which + ".csv");
    config.max_zero_fraction = 0.3;
    REQUIRE(commands::run_clr(config, err) == commands::kExitOk);
    CHECK(read_file(config.out) ==
          read_file(fixture(std::string("golden/toy_") + which + "_design.csv")));
  }
  CHECK(err.str().empty());
}

TEST_CASE("analyze command matches the golden JSON byte for byte and reruns identically") {
  std::ostringstream err;
  const auto config = toy_analyze_config(temp_path("analyze.json"));
  REQUIRE(commands::run_analyze(config, err) == commands::kExitOk);
  const std::string first = read_file(config.out);
  CHECK(first == read_file(fixture("golden/toy_analyze.json")));

  REQUIRE(commands::run_analyze(config, err) == commands::kExitOk);
  CHECK(read_file(config.out) == first);

  auto reseeded = config;
  reseeded.seed = 43;
  reseeded.out = temp_path("analyze_seed43.json");
  REQUIRE(commands::run_analyze(reseeded, err) == commands::kExitOk);
  CHECK(read_file(reseeded.out) != first);
}

TEST_CASE("analyze command exits 2 on a degenerate first stage") {
  std::ostringstream err;
  auto config = toy_analyze_config(temp_path("analyze_degen.json"));
  config.external_metabolite = fixture("toy_external_metabolite_null.csv");
  CHECK(commands::run_analyze(config, err) == commands::kExitDegenerate);
  const std::string json = read_file(config.out);
  CHECK(json.find("\"status\": \"degenerate_first_stage\"") != std::string::npos);
  CHECK(json.find("\"p_value\": 1") != std::string::npos);
}

TEST_CASE("analyze command maps input problems to exit code 1 with a diagnostic") {
  std::ostringstream err;
  auto config = toy_analyze_config(temp_path("analyze_bad.json"));
  config.external_metabolite = fixture("no_such_file.csv");
  CHECK(commands::run_analyze(config, err) == commands::kExitError);
  CHECK(err.str().find("no_such_file.csv") != std::string::npos);
}

TEST_CASE("target-only command matches its golden") {
  std::ostringstream err;
  RunConfig config;
  config.target_design = fixture("golden/toy_target_design.csv");
  config.target_outcome = fixture("toy_target_outcome.csv");
  config.target_metabolite = fixture("toy_target_metabolite.csv");
  config.out = temp_path("target_only.json");
  config.seed = 42;
  REQUIRE(commands::run_target_only(config, err) == commands::kExitOk);
  CHECK(read_file(config.out) == read_file(fixture("golden/toy_target_only.json")));
}

TEST_CASE("sample-split command runs on the toy data") {
  std::ostringstream err;
  RunConfig config;
  config.target_design = fixture("golden/toy_target_design.csv");
  config.target_outcome = fixture("toy_target_outcome.csv");
  config.target_metabolite = fixture("toy_target_metabolite.csv");
  config.out = temp_path("sample_split.json");
  config.seed = 44;
  REQUIRE(commands::run_sample_split(config, err) == commands::kExitOk);
  const std::string a = read_file(config.out);
  REQUIRE(commands::run_sample_split(config, err) == commands::kExitOk);
  CHECK(read_file(config.out) == a);
  CHECK(a.find("\"mode\": \"sample_split\"") != std::string::npos);
}

TEST_CASE("screen command is byte-identical across parallelism and matches its golden") {
  std::ostringstream err;
  RunConfig config;
  config.target_design = fixture("golden/toy_target_design.csv");
  config.target_outcome = fixture("toy_target_outcome.csv");
  config.external_design = fixture("golden/toy_external_design.csv");
  config.external_metabolites = fixture("toy_external_panel.csv");
  config.target_metabolites = fixture("toy_target_panel.csv");
  config.seed = 42;

  config.parallelism = 1;
  config.out = temp_path("screen_p1.csv");
  REQUIRE(commands::run_screen(config, err) == commands::kExitOk);
  config.parallelism = 8;
  config.out = temp_path("screen_p8.csv");
  REQUIRE(commands::run_screen(config, err) == commands::kExitOk);

  const std::string p1 = read_file(temp_path("screen_p1.csv"));
  CHECK(p1 == read_file(temp_path("screen_p8.csv")));
  CHECK(p1 == read_file(fixture("golden/toy_screen.csv")));

  // Three metabolites, deterministic order: signal first, noise second,
  // constant column as a trailing error row that never aborts the batch.
  std::istringstream lines(p1);
  std::string line;
  std::getline(lines, line);  // header
  std::getline(lines, line);
  CHECK(line.rfind("met_a,ok", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("met_noise,ok", 0) == 0);
  std::getline(lines, line);
  CHECK(line.rfind("met_const,error", 0) == 0);
  CHECK(line.find("zero variance metabolite") != std::string::npos);
}

TEST_CASE("pred-corr command emits the golden JSON report") {
  std::ostringstream out, err;
  RunConfig config;
  config.target_design = fixture("golden/toy_target_design.csv");
  config.target_outcome = fixture("toy_target_outcome.csv");
  config.target_metabolite = fixture("toy_target_metabolite.csv");
  config.external_design = fixture("golden/toy_external_design.csv");
  config.external_metabolite = fixture("toy_external_metabolite.csv");
  config.seed = 42;
  config.json_output = true;
  REQUIRE(commands::run_pred_corr(config, out, err) == commands::kExitOk);
  CHECK(out.str() == read_file(fixture("golden/toy_pred_corr.json")));
  CHECK(out.str().find("\"verdict\": \"adequate\"") != std::string::npos);

  // Text mode with an unreachable cutoff flips the verdict.
  std::ostringstream out2;
  config.json_output = false;
  config.pc_cutoff = 1.01;
  REQUIRE(commands::run_pred_corr(config, out2, err) == commands::kExitOk);
  CHECK(out2.str().find("low informativeness") != std::string::npos);

  std::ostringstream err2;
  config.target_metabolite.clear();
  CHECK(commands::run_pred_corr(config, out2, err2) == commands::kExitError);
  CHECK(err2.str().find("--target-metabolite") != std::string::npos);
}

TEST_CASE("simulate command writes JSON and sweep CSV deterministically") {
  const std::string scenario_path = temp_path("scenario.json");
  {
    std::ofstream f(scenario_path);
    f << R"({"p": 60, "n": 70, "N": 80, "layout": "weak_leading", "perturbation": "scale_change",
            "tau": [0.5, 1.0, 2.0], "theta_star": 0.0, "rho": 0.0,
            "n_reps": 2, "master_seed": 99, "block_size": 3})";
  }
  std::ostringstream err;
  RunConfig config;
  config.scenario = scenario_path;
  config.out = temp_path("sim.json");
  config.out_csv = temp_path("sim.csv");
  REQUIRE(commands::run_simulate(config, err) == commands::kExitOk);
  const std::string json1 = read_file(config.out);
  const std::string csv1 = read_file(config.out_csv);
  REQUIRE(commands::run_simulate(config, err) == commands::kExitOk);
  CHECK(read_file(config.out) == json1);
  CHECK(read_file(config.out_csv) == csv1);

  // Header plus three sweep rows in grid order.
  std::istringstream lines(csv1);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1].find(",0.5,scale_change,") != std::string::npos);
  CHECK(rows[2].find(",1,scale_change,") != std::string::npos);
  CHECK(rows[3].find(",2,scale_change,") != std::string::npos);
  CHECK(json1.find("\"sweep_key\": \"tau\"") != std::string::npos);
}

TEST_CASE("simulate command rejects invalid scenarios with the key path") {
  const std::string bad_path = temp_path("bad_scenario.json");
  {
    std::ofstream f(bad_path);
    f << R"({"n_reps": -3})";
  }
  std::ostringstream err;
  RunConfig config;
  config.scenario = bad_path;
  config.out = temp_path("never.json");
  CHECK(commands::run_simulate(config, err) == commands::kExitError);
  CHECK(err.str().find("scenario.n_reps") != std::string::npos);
}

TEST_CASE("simulate presets parse and expand") {
  for (const auto& name : scenario::list_presets()) {
    const auto job = scenario::preset_sim_job(name);
    const auto cells = scenario::expand(job);
    CHECK(!cells.empty());
    if (!job.sweep_key.empty()) CHECK(cells.size() == job.sweep_values.size());
  }
  CHECK_THROWS_WITH_AS(scenario::preset_sim_job("nope"), doctest::Contains("unknown preset"),
                       std::runtime_error);
}

TEST_CASE("scenario sweeps reject two array keys") {
  CHECK_THROWS_WITH_AS(
      scenario::parse_sim_job(R"({"theta_star": [0, 0.1], "tau": [1, 2]})"),
      doctest::Contains("only one"), std::runtime_error);
}

TEST_CASE("resolve_parallelism prefers explicit, then environment") {
  CHECK(commands::resolve_parallelism(3) == 3);
  setenv("MMDPATH_PARALLELISM", "5", 1);
  CHECK(commands::resolve_parallelism(0) == 5);
  unsetenv("MMDPATH_PARALLELISM");
  CHECK(commands::resolve_parallelism(0) >= 1);
}
