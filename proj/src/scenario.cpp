#include "mmdpath/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

namespace mmdpath::scenario {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& expected) {
  throw std::runtime_error("scenario." + key + ": expected " + expected);
}

int get_positive_int(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer() || j[key].get<long long>() < 1) {
    fail(key, "a positive integer");
  }
  return j[key].get<int>();
}

double get_double(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(key, "a number");
  return j[key].get<double>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) fail(key, "a boolean");
  return j[key].get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) fail(key, "a string");
  return j[key].get<std::string>();
}

sim::PerturbationKind parse_perturbation(const std::string& s) {
  if (s == "none") return sim::PerturbationKind::none;
  if (s == "scale_change") return sim::PerturbationKind::scale_change;
  if (s == "position_change") return sim::PerturbationKind::position_change;
  fail("perturbation", "one of none|scale_change|position_change");
}

sim::Method parse_method(const std::string& s) {
  if (s == "integrative") return sim::Method::integrative;
  if (s == "target_only") return sim::Method::target_only;
  if (s == "sample_split") return sim::Method::sample_split;
  fail("method", "one of integrative|target_only|sample_split");
}

sim::SignalLayout parse_layout(const std::string& s) {
  if (s == "baseline") return sim::SignalLayout::baseline;
  if (s == "strong_beta") return sim::SignalLayout::strong_beta;
  if (s == "weak_leading") return sim::SignalLayout::weak_leading;
  fail("layout", "one of baseline|strong_beta|weak_leading");
}

}  // namespace

SimJob parse_sim_job(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("scenario: expected a JSON object");

  SimJob job;
  sim::Scenario& s = job.base;
  s.p = get_positive_int(j, "p", s.p);
  s.n = get_positive_int(j, "n", s.n);
  s.rho = get_double(j, "rho", s.rho);
  s.alpha = get_double(j, "alpha", s.alpha);
  if (!(s.alpha > 0.0 && s.alpha < 1.0)) fail("alpha", "a number in (0,1)");
  s.perturbation = parse_perturbation(get_string(j, "perturbation", "none"));
  s.method = parse_method(get_string(j, "method", "integrative"));
  s.layout = parse_layout(get_string(j, "layout", "baseline"));
  s.block_size = get_positive_int(j, "block_size", s.block_size);
  s.external_delta_sd = get_double(j, "external_delta_sd", s.external_delta_sd);
  s.split_fraction = get_double(j, "split_fraction", s.split_fraction);
  s.track_predictive_correlation =
      get_bool(j, "track_predictive_correlation", s.track_predictive_correlation);
  s.pathway.cv_folds = get_positive_int(j, "folds", s.pathway.cv_folds);
  s.pathway.variance_folds = get_positive_int(j, "variance_folds", s.pathway.variance_folds);
  s.pathway.c_gamma = get_double(j, "c_gamma", s.pathway.c_gamma);
  s.pathway.c_beta = get_double(j, "c_beta", s.pathway.c_beta);
  s.pathway.corr_budget = get_double(j, "corr_budget", s.pathway.corr_budget);
  s.pathway.n_lambdas = get_positive_int(j, "n_lambdas", s.pathway.n_lambdas);
  s.pathway.lambda_ratio = get_double(j, "lambda_ratio", s.pathway.lambda_ratio);
  s.pathway.one_se_rule = get_bool(j, "one_se_rule", false);
  s.pathway.variance_unsquared = get_bool(j, "variance_unsquared", false);
  s.pathway.p_value_variance_denominator = get_bool(j, "p_value_variance_denominator", false);

  job.n_reps = get_positive_int(j, "n_reps", job.n_reps);
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned() && !j["master_seed"].is_number_integer()) {
      fail("master_seed", "an integer");
    }
    job.master_seed = j["master_seed"].get<std::uint64_t>();
  }

  // theta_star, tau and N accept either a scalar or a sweep array; at most
  // one may be an array.
  auto sweepable = [&](const char* key, double fallback, double* scalar_out) {
    if (!j.contains(key)) { *scalar_out = fallback; return false; }
    const json& v = j[key];
    if (v.is_number()) { *scalar_out = v.get<double>(); return false; }
    if (v.is_array()) {
      if (v.empty()) fail(key, "a non-empty array");
      if (!job.sweep_key.empty()) {
        throw std::runtime_error("scenario: only one of theta_star|tau|N may be an array");
      }
      job.sweep_key = key;
      for (const auto& x : v) {
        if (!x.is_number()) fail(key, "an array of numbers");
        job.sweep_values.push_back(x.get<double>());
      }
      *scalar_out = job.sweep_values.front();
      return true;
    }
    fail(key, "a number or an array of numbers");
  };
  sweepable("theta_star", s.theta_star, &s.theta_star);
  sweepable("tau", s.tau, &s.tau);
  double n_external = static_cast<double>(s.N);
  sweepable("N", n_external, &n_external);
  s.N = static_cast<int>(n_external);
  if (s.N < 1) fail("N", "a positive integer");

  if (s.tau < 0.0) fail("tau", "a nonnegative number");
  if (s.perturbation != sim::PerturbationKind::none && job.sweep_key != "tau" && s.tau == 0.0) {
    fail("tau", "a positive value when a perturbation kind is set");
  }
  return job;
}

SimJob load_sim_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sim_job(buf.str());
}

std::vector<sim::Scenario> expand(const SimJob& job) {
  if (job.sweep_key.empty()) return {job.base};
  std::vector<sim::Scenario> cells;
  cells.reserve(job.sweep_values.size());
  for (double v : job.sweep_values) {
    sim::Scenario s = job.base;
    if (job.sweep_key == "theta_star") {
      s.theta_star = v;
    } else if (job.sweep_key == "tau") {
      s.tau = v;
    } else if (job.sweep_key == "N") {
      s.N = static_cast<int>(v);
    } else {
      throw std::logic_error("unknown sweep key: " + job.sweep_key);
    }
    cells.push_back(std::move(s));
  }
  return cells;
}

namespace {

const std::vector<double> kTauGrid = {0.25, 0.5, 0.75, 1.0, 1.25, 2.0, 4.0};
const std::vector<double> kThetaGrid = {0.0, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2};

SimJob desk_base() {
  SimJob job;
  job.base.p = 100;
  job.base.n = 200;
  job.base.N = 300;
  job.n_reps = 100;
  job.master_seed = 20240101;
  return job;
}

SimJob tau_job(sim::PerturbationKind kind, double theta_star) {
  SimJob job = desk_base();
  job.base.layout = sim::SignalLayout::weak_leading;
  job.base.perturbation = kind;
  job.base.theta_star = theta_star;
  job.base.rho = 0.0;
  job.base.track_predictive_correlation = true;
  job.sweep_key = "tau";
  job.sweep_values = kTauGrid;
  job.base.tau = kTauGrid.front();
  return job;
}

}  // namespace

SimJob preset_sim_job(const std::string& name) {
  if (name == "fig2b-desk") {
    SimJob job = desk_base();
    job.base.theta_star = 0.2;
    job.base.rho = 0.25;
    return job;
  }
  if (name == "fig2c-desk" || name == "fig2d-desk" || name == "fig2c-target-desk" ||
      name == "fig2d-target-desk") {
    SimJob job = desk_base();
    job.n_reps = 200;
    job.base.theta_star = 0.0;
    job.base.rho = (name == "fig2c-desk" || name == "fig2c-target-desk") ? 0.0 : 0.25;
    if (name.find("target") != std::string::npos) job.base.method = sim::Method::target_only;
    return job;
  }
  if (name == "power-grid-desk") {
    SimJob job = desk_base();
    job.base.rho = 0.25;
    job.sweep_key = "theta_star";
    job.sweep_values = kThetaGrid;
    return job;
  }
  if (name == "selection-desk") {
    SimJob job = desk_base();
    job.base.n = 300;
    job.base.layout = sim::SignalLayout::strong_beta;
    job.base.theta_star = 0.2;
    job.base.rho = 0.25;
    return job;
  }
  // External-size sweeps at two grid variants.
  if (name == "external-grid-300" || name == "external-grid-250") {
    SimJob job = desk_base();
    job.base.theta_star = 0.2;
    job.base.rho = 0.25;
    job.sweep_key = "N";
    job.sweep_values = name == "external-grid-300" ? std::vector<double>{150, 200, 300}
                                                   : std::vector<double>{150, 200, 250};
    return job;
  }
  if (name == "tau-scale-desk") return tau_job(sim::PerturbationKind::scale_change, 0.0);
  if (name == "tau-position-desk") return tau_job(sim::PerturbationKind::position_change, 0.0);
  if (name == "tau-scale-power-desk") return tau_job(sim::PerturbationKind::scale_change, 0.3);
  if (name == "tau-position-power-desk") {
    return tau_job(sim::PerturbationKind::position_change, 0.3);
  }
  // Full-scale synthetic run: at p = 393 the weak_leading layout designates
  // support head 1..5 and tail 388..393 as the scale-change candidates and
  // 6..15 as the position-change indices.
  if (name == "tau-scale-p393") {
    SimJob job = tau_job(sim::PerturbationKind::scale_change, 0.0);
    job.base.p = 393;
    job.base.block_size = 10;
    job.base.n = 220;
    job.base.N = 347;
    return job;
  }
  throw std::runtime_error("unknown preset: " + name + " (see list-presets)");
}

std::vector<std::string> list_presets() {
  return {"fig2b-desk",         "fig2c-desk",         "fig2c-target-desk",
          "fig2d-desk",         "fig2d-target-desk",  "power-grid-desk",
          "selection-desk",     "external-grid-300",  "external-grid-250",
          "tau-scale-desk",     "tau-position-desk",  "tau-scale-power-desk",
          "tau-position-power-desk", "tau-scale-p393"};
}

}  // namespace mmdpath::scenario
