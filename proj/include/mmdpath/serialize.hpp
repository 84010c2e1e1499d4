#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmdpath/json_writer.hpp"
#include "mmdpath/pathway.hpp"
#include "mmdpath/sim.hpp"

namespace mmdpath::serialize {

extern const int kSchemaVersion;

std::string mode_name(pathway::PathwayMode mode);
std::string status_name(pathway::PathwayStatus status);
std::string method_name(sim::Method method);
std::string perturbation_name(sim::PerturbationKind kind);
std::string layout_name(sim::SignalLayout layout);

jsonw::Value cv_to_json(const lasso::CvResult& cv);
jsonw::Value pathway_to_json(const pathway::PathwayResult& result);
jsonw::Value summary_to_json(const sim::SimSummary& summary);
jsonw::Value scenario_to_json(const sim::Scenario& scenario, int n_reps, std::uint64_t master_seed);

/// One row per screened metabolite; sorted by ascending p-value, ties and
/// missing p-values ordered by metabolite id.
struct ScreenRow {
  std::string metabolite_id;
  std::string status;  // ok | degenerate_first_stage | error
  std::optional<double> theta_tilde;
  std::optional<double> p_value;
  std::optional<double> sigma_eps_hat;
  std::optional<int> g1, g2, g3, g4;
  std::optional<double> predictive_correlation;
  std::string detail;  // error message for status = error
};

std::string screen_csv(std::vector<ScreenRow> rows);

/// Flat CSV for sweep concatenation: header plus one row per summary.
std::string summaries_csv(const std::vector<sim::Scenario>& scenarios,
                          const std::vector<sim::SimSummary>& summaries,
                          const std::vector<int>& n_reps,
                          const std::vector<std::uint64_t>& master_seeds);

}  // namespace mmdpath::serialize
