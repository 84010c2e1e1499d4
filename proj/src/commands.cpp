#include "mmdpath/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "mmdpath/csv.hpp"
#include "mmdpath/parallel.hpp"
#include "mmdpath/preprocess.hpp"
#include "mmdpath/rng.hpp"
#include "mmdpath/scenario.hpp"
#include "mmdpath/serialize.hpp"
#include "mmdpath/stats.hpp"

namespace mmdpath::commands {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

pathway::PathwayConfig pathway_config(const RunConfig& config) {
  pathway::PathwayConfig out;
  out.seed = config.seed;
  out.cv_folds = config.folds;
  out.variance_folds = config.variance_folds;
  out.c_gamma = config.c_gamma;
  out.c_beta = config.c_beta;
  out.corr_budget = config.corr_budget;
  out.one_se_rule = config.one_se_rule;
  out.variance_unsquared = config.variance_unsquared;
  out.p_value_variance_denominator = config.p_value_variance_denominator;
  return out;
}

struct LoadedTarget {
  core::TargetDataset dataset;
  std::vector<std::string> sample_ids;
};

LoadedTarget load_target(const RunConfig& config, bool need_metabolite) {
  require(!config.target_design.empty(), "missing --target-design");
  require(!config.target_outcome.empty(), "missing --target-outcome");
  LoadedTarget out;
  out.dataset.design = csv::read_design_csv(config.target_design, &out.sample_ids);
  const core::Vector y = csv::read_value_csv(config.target_outcome, out.sample_ids);
  out.dataset.outcome = core::standardize_metabolite(y, /*log_first=*/false);
  if (!config.target_metabolite.empty()) {
    const core::Vector m = csv::read_value_csv(config.target_metabolite, out.sample_ids);
    out.dataset.metabolite = core::standardize_metabolite(m, !config.metabolite_no_log);
  } else {
    require(!need_metabolite, "missing --target-metabolite");
  }
  out.dataset.validate();
  return out;
}

core::ExternalDataset load_external(const RunConfig& config) {
  require(!config.external_design.empty(), "missing --external-design");
  require(!config.external_metabolite.empty(), "missing --external-metabolite");
  core::ExternalDataset out;
  std::vector<std::string> sample_ids;
  out.design = csv::read_design_csv(config.external_design, &sample_ids);
  const core::Vector m = csv::read_value_csv(config.external_metabolite, sample_ids);
  out.metabolite = core::standardize_metabolite(m, !config.metabolite_no_log);
  out.validate();
  return out;
}

int write_pathway_result(const pathway::PathwayResult& result, const RunConfig& config) {
  require(!config.out.empty(), "missing --out");
  write_text_file(config.out, serialize::pathway_to_json(result).dump(2) + "\n");
  return result.status == pathway::PathwayStatus::degenerate_first_stage ? kExitDegenerate
                                                                         : kExitOk;
}

int guarded(std::ostream& err, const char* command, int (*body)(const RunConfig&, std::ostream&),
            const RunConfig& config) {
  try {
    return body(config, err);
  } catch (const std::exception& e) {
    err << command << ": error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

int resolve_parallelism(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MMDPATH_PARALLELISM")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return parallel::hardware_parallelism();
}

namespace {

int clr_body(const RunConfig& config, std::ostream&) {
  require(!config.input.empty(), "missing --input");
  require(!config.out.empty(), "missing --out");
  core::AbundanceTable table = csv::read_abundance_csv(config.input);
  if (config.max_zero_fraction >= 0.0) {
    table = core::filter_prevalence(table, config.max_zero_fraction);
  }
  const auto policy = config.pseudocount_all_entries ? core::PseudocountPolicy::all_entries
                                                     : core::PseudocountPolicy::zeros_only;
  const core::DesignMatrix design = core::clr_transform(table, config.pseudocount, policy);
  csv::write_design_csv(config.out, design, table.sample_ids);
  return kExitOk;
}

int analyze_body(const RunConfig& config, std::ostream&) {
  LoadedTarget target = load_target(config, /*need_metabolite=*/false);
  core::ExternalDataset external = load_external(config);
  auto [aligned_target, aligned_external, report] = core::align_cohorts(target.dataset, external);
  (void)report;
  const pathway::PathwayResult result =
      pathway::run_integrative(aligned_target, aligned_external, pathway_config(config));
  return write_pathway_result(result, config);
}

int target_only_body(const RunConfig& config, std::ostream&) {
  LoadedTarget target = load_target(config, /*need_metabolite=*/true);
  const pathway::PathwayResult result =
      pathway::run_target_only(target.dataset, pathway_config(config));
  return write_pathway_result(result, config);
}

int sample_split_body(const RunConfig& config, std::ostream&) {
  LoadedTarget target = load_target(config, /*need_metabolite=*/true);
  pathway::PathwayConfig pconfig = pathway_config(config);
  const std::uint64_t split_seed =
      rng::derive_seed(config.seed, static_cast<std::uint64_t>(pathway::SeedSlot::sample_split));
  const pathway::PathwayResult result =
      pathway::run_sample_split(target.dataset, config.split_fraction, split_seed, pconfig);
  return write_pathway_result(result, config);
}

int screen_body(const RunConfig& config, std::ostream&) {
  require(!config.out.empty(), "missing --out");
  require(!config.external_design.empty(), "missing --external-design");
  require(!config.external_metabolites.empty(), "missing --external-metabolites");
  LoadedTarget target = load_target(config, /*need_metabolite=*/false);

  std::vector<std::string> external_sample_ids;
  core::ExternalDataset external_base;
  external_base.design = csv::read_design_csv(config.external_design, &external_sample_ids);
  const csv::LabeledTable panel =
      csv::read_value_matrix_csv(config.external_metabolites, external_sample_ids);

  csv::LabeledTable target_panel;
  bool have_target_panel = false;
  if (!config.target_metabolites.empty()) {
    target_panel = csv::read_value_matrix_csv(config.target_metabolites, target.sample_ids);
    have_target_panel = true;
  }

  const int n_metabolites = static_cast<int>(panel.column_ids.size());
  std::vector<serialize::ScreenRow> rows(static_cast<std::size_t>(n_metabolites));
  const int parallelism = resolve_parallelism(config.parallelism);

  parallel::for_each_index(n_metabolites, parallelism, [&](int k) {
    serialize::ScreenRow& row = rows[static_cast<std::size_t>(k)];
    row.metabolite_id = panel.column_ids[static_cast<std::size_t>(k)];
    try {
      core::ExternalDataset external = external_base;
      external.metabolite =
          core::standardize_metabolite(panel.values.col(k), !config.metabolite_no_log);
      auto [aligned_target, aligned_external, report] =
          core::align_cohorts(target.dataset, external);
      (void)report;
      pathway::PathwayConfig pconfig = pathway_config(config);
      pconfig.seed = rng::derive_seed(config.seed, static_cast<std::uint64_t>(k));
      const pathway::PathwayResult result =
          pathway::run_integrative(aligned_target, aligned_external, pconfig);
      row.status = serialize::status_name(result.status);
      row.theta_tilde = result.debias.theta_tilde;
      row.p_value = result.debias.p_value;
      row.sigma_eps_hat = result.debias.sigma_eps_hat;
      row.g1 = static_cast<int>(result.groups.g1.size());
      row.g2 = static_cast<int>(result.groups.g2.size());
      row.g3 = static_cast<int>(result.groups.g3.size());
      row.g4 = static_cast<int>(result.groups.g4.size());
      if (have_target_panel) {
        for (std::size_t c = 0; c < target_panel.column_ids.size(); ++c) {
          if (target_panel.column_ids[c] == row.metabolite_id) {
            core::TargetDataset proxy = aligned_target;
            proxy.metabolite = core::standardize_metabolite(
                target_panel.values.col(static_cast<int>(c)), !config.metabolite_no_log);
            row.predictive_correlation =
                pathway::predictive_correlation(proxy, aligned_external, pconfig);
            break;
          }
        }
      }
    } catch (const std::exception& e) {
      row.status = "error";
      row.detail = e.what();
    }
  });

  write_text_file(config.out, serialize::screen_csv(std::move(rows)));
  return kExitOk;
}

int simulate_body(const RunConfig& config, std::ostream&) {
  require(!config.out.empty(), "missing --out");
  require(config.scenario.empty() != config.preset.empty(),
          "exactly one of --scenario or --preset is required");
  scenario::SimJob job = config.scenario.empty() ? scenario::preset_sim_job(config.preset)
                                                 : scenario::load_sim_job(config.scenario);
  if (config.seed != 0) job.master_seed = config.seed;

  const std::vector<sim::Scenario> cells = scenario::expand(job);
  const int parallelism = resolve_parallelism(config.parallelism);

  std::vector<sim::SimSummary> summaries;
  summaries.reserve(cells.size());
  for (const sim::Scenario& cell : cells) {
    summaries.push_back(sim::run_replications(cell, job.n_reps, job.master_seed, parallelism));
  }

  jsonw::Value doc = jsonw::Value::object();
  doc.set("schema_version", serialize::kSchemaVersion);
  if (!config.preset.empty()) doc.set("preset", config.preset);
  if (!job.sweep_key.empty()) doc.set("sweep_key", job.sweep_key);
  jsonw::Value results = jsonw::Value::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    jsonw::Value entry = jsonw::Value::object();
    entry.set("scenario", serialize::scenario_to_json(cells[i], job.n_reps, job.master_seed));
    entry.set("summary", serialize::summary_to_json(summaries[i]));
    results.push(std::move(entry));
  }
  doc.set("results", std::move(results));
  write_text_file(config.out, doc.dump(2) + "\n");

  if (!config.out_csv.empty()) {
    const std::vector<int> reps(cells.size(), job.n_reps);
    const std::vector<std::uint64_t> seeds(cells.size(), job.master_seed);
    write_text_file(config.out_csv, serialize::summaries_csv(cells, summaries, reps, seeds));
  }
  return kExitOk;
}

}  // namespace

int run_clr(const RunConfig& config, std::ostream& err) {
  return guarded(err, "clr", clr_body, config);
}
int run_analyze(const RunConfig& config, std::ostream& err) {
  return guarded(err, "analyze", analyze_body, config);
}
int run_target_only(const RunConfig& config, std::ostream& err) {
  return guarded(err, "target-only", target_only_body, config);
}
int run_sample_split(const RunConfig& config, std::ostream& err) {
  return guarded(err, "sample-split", sample_split_body, config);
}
int run_screen(const RunConfig& config, std::ostream& err) {
  return guarded(err, "screen", screen_body, config);
}
int run_simulate(const RunConfig& config, std::ostream& err) {
  return guarded(err, "simulate", simulate_body, config);
}

int run_pred_corr(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    LoadedTarget target = load_target(config, /*need_metabolite=*/true);
    core::ExternalDataset external = load_external(config);
    auto [aligned_target, aligned_external, report] =
        core::align_cohorts(target.dataset, external);
    (void)report;
    const double corr =
        pathway::predictive_correlation(aligned_target, aligned_external, pathway_config(config));
    const bool adequate = corr >= config.pc_cutoff;
    const char* verdict = adequate ? "adequate" : "low informativeness";
    std::string text;
    if (config.json_output) {
      jsonw::Value doc = jsonw::Value::object();
      doc.set("schema_version", serialize::kSchemaVersion);
      doc.set("predictive_correlation", corr);
      doc.set("cutoff", config.pc_cutoff);
      doc.set("verdict", verdict);
      text = doc.dump(2) + "\n";
    } else {
      text = "predictive_correlation " + csv::format_double(corr) + "\nverdict " + verdict + "\n";
    }
    out << text;
    if (!config.out.empty()) write_text_file(config.out, text);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "pred-corr: error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace mmdpath::commands
