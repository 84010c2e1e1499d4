#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmdpath/sim.hpp"

namespace mmdpath::scenario {

/// A simulation job: one scenario, optionally swept over a single key
/// ("tau", "theta_star" or "N"); every sweep cell shares n_reps and
/// master_seed.
struct SimJob {
  sim::Scenario base;
  int n_reps = 100;
  std::uint64_t master_seed = 1;
  std::string sweep_key;              // empty for a single cell
  std::vector<double> sweep_values;   // grid order preserved in outputs
};

/// Parses the scenario JSON document. Errors name the offending key, e.g.
/// "scenario.n_reps: expected a positive integer".
SimJob parse_sim_job(const std::string& json_text);
SimJob load_sim_job(const std::string& path);

/// Named desk-scale presets (see list_presets). Throws on unknown name.
SimJob preset_sim_job(const std::string& name);
std::vector<std::string> list_presets();

/// Expands a job into its per-cell scenarios (one when not swept).
std::vector<sim::Scenario> expand(const SimJob& job);

}  // namespace mmdpath::scenario
