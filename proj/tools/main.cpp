#include <CLI11.hpp>
#include <iostream>

#include "mmdpath/commands.hpp"
#include "mmdpath/scenario.hpp"

namespace {

using mmdpath::commands::RunConfig;

void add_inference_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--seed", config.seed, "Master seed for every randomized step");
  cmd->add_option("--folds", config.folds, "Cross-validation folds")->default_val(5);
  cmd->add_option("--variance-folds", config.variance_folds,
                  "Folds for the noise-variance refit")->default_val(10);
  cmd->add_option("--c-gamma", config.c_gamma, "Hard threshold for gamma")->default_val(0.1);
  cmd->add_option("--c-beta", config.c_beta, "Hard threshold for beta")->default_val(0.1);
  cmd->add_option("--alpha", config.alpha, "Significance level")->default_val(0.05);
  cmd->add_option("--corr-budget", config.corr_budget,
                  "Residual-direction column-correlation budget (units of sqrt(log p))")
      ->default_val(2.0);
  cmd->add_flag("--metabolite-no-log", config.metabolite_no_log,
                "Metabolite values are already on the log scale; skip the log step");
  cmd->add_flag("--one-se-rule", config.one_se_rule,
                "Pick the largest lambda within one SE of the CV minimum");
  cmd->add_flag("--variance-unsquared", config.variance_unsquared,
                "Noise variance as ||r||/(n-s) instead of ||r||^2/(n-s)");
  cmd->add_flag("--pvalue-variance-denominator", config.p_value_variance_denominator,
                "Divide the test statistic by the variance instead of the SD");
}

void add_target_inputs(CLI::App* cmd, RunConfig& config, bool metabolite_required) {
  cmd->add_option("--target-design", config.target_design, "Target design matrix CSV")
      ->required();
  cmd->add_option("--target-outcome", config.target_outcome, "Target outcome CSV")->required();
  auto* m = cmd->add_option("--target-metabolite", config.target_metabolite,
                            "Target metabolite CSV");
  if (metabolite_required) m->required();
}

void add_external_inputs(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--external-design", config.external_design, "External design matrix CSV")
      ->required();
  cmd->add_option("--external-metabolite", config.external_metabolite,
                  "External metabolite CSV")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrative two-stage debiased-lasso inference for "
               "microbiome-metabolome-outcome pathways"};
  app.require_subcommand(1);

  RunConfig config;

  auto* clr = app.add_subcommand("clr", "Prevalence-filter and CLR-transform an abundance table");
  clr->add_option("--input", config.input, "Abundance CSV (samples x taxa)")->required();
  clr->add_option("--out", config.out, "Output design CSV")->required();
  clr->add_option("--pseudocount", config.pseudocount, "Pseudocount for zeros")->default_val(1e-8);
  clr->add_option("--max-zero-fraction", config.max_zero_fraction,
                  "Drop taxa with a larger zero fraction (omit to keep all)");
  clr->add_flag("--pseudocount-all-entries", config.pseudocount_all_entries,
                "Add the pseudocount to every entry, not only zeros");

  auto* analyze = app.add_subcommand(
      "analyze", "Integrative two-stage analysis of one external metabolite");
  add_target_inputs(analyze, config, false);
  add_external_inputs(analyze, config);
  analyze->add_option("--out", config.out, "Output PathwayResult JSON")->required();
  add_inference_options(analyze, config);

  auto* target_only = app.add_subcommand(
      "target-only", "Single-cohort analysis with the observed metabolite");
  add_target_inputs(target_only, config, true);
  target_only->add_option("--out", config.out, "Output PathwayResult JSON")->required();
  add_inference_options(target_only, config);

  auto* sample_split = app.add_subcommand(
      "sample-split", "Split the target cohort and run the integrative analysis across halves");
  add_target_inputs(sample_split, config, true);
  sample_split->add_option("--out", config.out, "Output PathwayResult JSON")->required();
  sample_split->add_option("--split-fraction", config.split_fraction,
                           "Fraction of rows used as the pseudo-external half")->default_val(0.5);
  add_inference_options(sample_split, config);

  auto* screen = app.add_subcommand(
      "screen", "Run the integrative analysis for every metabolite in a panel");
  add_target_inputs(screen, config, false);
  screen->add_option("--external-design", config.external_design, "External design matrix CSV")
      ->required();
  screen->add_option("--external-metabolites", config.external_metabolites,
                     "External metabolite panel CSV (columns = metabolites)")->required();
  screen->add_option("--target-metabolites", config.target_metabolites,
                     "Optional target panel; enables predictive correlation for shared columns");
  screen->add_option("--out", config.out, "Output screening CSV")->required();
  screen->add_option("--parallelism", config.parallelism,
                     "Worker threads (default: MMDPATH_PARALLELISM or hardware)");
  add_inference_options(screen, config);

  auto* simulate = app.add_subcommand("simulate", "Run a replicated simulation scenario");
  simulate->add_option("--scenario", config.scenario, "Scenario JSON file");
  simulate->add_option("--preset", config.preset, "Named preset scenario");
  simulate->add_option("--out", config.out, "Output summary JSON")->required();
  simulate->add_option("--out-csv", config.out_csv, "Optional flat CSV (one row per sweep cell)");
  simulate->add_option("--seed", config.seed, "Override the scenario master seed");
  simulate->add_option("--parallelism", config.parallelism,
                       "Worker threads (default: MMDPATH_PARALLELISM or hardware)");

  auto* presets = app.add_subcommand("list-presets", "Print the available simulation presets");

  auto* pred_corr = app.add_subcommand(
      "pred-corr", "Predictive-correlation informativeness diagnostic for an external cohort");
  add_target_inputs(pred_corr, config, true);
  add_external_inputs(pred_corr, config);
  pred_corr->add_option("--out", config.out, "Also write the report to this path");
  pred_corr->add_option("--pc-cutoff", config.pc_cutoff,
                        "Correlation at or above which the cohort is called adequate")
      ->default_val(0.6);
  pred_corr->add_flag("--json", config.json_output, "Emit a JSON object instead of text");
  add_inference_options(pred_corr, config);

  CLI11_PARSE(app, argc, argv);

  using namespace mmdpath::commands;
  if (clr->parsed()) return run_clr(config, std::cerr);
  if (analyze->parsed()) return run_analyze(config, std::cerr);
  if (target_only->parsed()) return run_target_only(config, std::cerr);
  if (sample_split->parsed()) return run_sample_split(config, std::cerr);
  if (screen->parsed()) return run_screen(config, std::cerr);
  if (simulate->parsed()) return run_simulate(config, std::cerr);
  if (presets->parsed()) {
    for (const auto& name : mmdpath::scenario::list_presets()) std::cout << name << "\n";
    return kExitOk;
  }
  if (pred_corr->parsed()) return run_pred_corr(config, std::cout, std::cerr);
  return kExitError;
}
