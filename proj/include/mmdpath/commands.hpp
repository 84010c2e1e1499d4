#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace mmdpath::commands {

// Exit codes shared by every command: 0 ok, 1 input/configuration error,
// 2 statistical degeneracy (degenerate first stage).
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;

struct RunConfig {
  // input paths
  std::string input;               // clr: abundance CSV
  std::string target_design;
  std::string target_outcome;
  std::string target_metabolite;
  std::string external_design;
  std::string external_metabolite;   // single column (analyze, pred-corr)
  std::string external_metabolites;  // panel, columns = metabolites (screen)
  std::string scenario;              // simulate: scenario JSON path
  std::string preset;                // simulate: preset name
  std::string target_metabolites;    // screen: optional panel for predictive correlation

  // output paths
  std::string out;
  std::string out_csv;  // simulate: flat CSV next to the JSON

  std::uint64_t seed = 0;
  int folds = 5;
  int variance_folds = 10;
  double c_gamma = 0.1;
  double c_beta = 0.1;
  double alpha = 0.05;
  double corr_budget = 2.0;
  double pseudocount = 1e-8;
  double max_zero_fraction = -1.0;  // < 0 disables prevalence filtering
  double split_fraction = 0.5;
  double pc_cutoff = 0.6;  // pred-corr informativeness verdict
  int parallelism = 0;     // 0: MMDPATH_PARALLELISM env or hardware
  bool json_output = false;
  bool metabolite_no_log = false;  // metabolite columns are already log scale
  // documented variant behaviors
  bool pseudocount_all_entries = false;
  bool one_se_rule = false;
  bool variance_unsquared = false;
  bool p_value_variance_denominator = false;
};

int run_clr(const RunConfig& config, std::ostream& err);
int run_analyze(const RunConfig& config, std::ostream& err);
int run_target_only(const RunConfig& config, std::ostream& err);
int run_sample_split(const RunConfig& config, std::ostream& err);
int run_screen(const RunConfig& config, std::ostream& err);
int run_simulate(const RunConfig& config, std::ostream& err);
int run_pred_corr(const RunConfig& config, std::ostream& out, std::ostream& err);

int resolve_parallelism(int requested);

}  // namespace mmdpath::commands
