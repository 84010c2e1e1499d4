#include "mmdpath/serialize.hpp"

#include <algorithm>
#include <limits>

#include "mmdpath/csv.hpp"

namespace mmdpath::serialize {

const int kSchemaVersion = 1;

std::string mode_name(pathway::PathwayMode mode) {
  switch (mode) {
    case pathway::PathwayMode::integrative: return "integrative";
    case pathway::PathwayMode::target_only: return "target_only";
    case pathway::PathwayMode::sample_split: return "sample_split";
  }
  return "unknown";
}

std::string status_name(pathway::PathwayStatus status) {
  return status == pathway::PathwayStatus::ok ? "ok" : "degenerate_first_stage";
}

std::string method_name(sim::Method method) {
  switch (method) {
    case sim::Method::integrative: return "integrative";
    case sim::Method::target_only: return "target_only";
    case sim::Method::sample_split: return "sample_split";
  }
  return "unknown";
}

std::string perturbation_name(sim::PerturbationKind kind) {
  switch (kind) {
    case sim::PerturbationKind::none: return "none";
    case sim::PerturbationKind::scale_change: return "scale_change";
    case sim::PerturbationKind::position_change: return "position_change";
  }
  return "unknown";
}

std::string layout_name(sim::SignalLayout layout) {
  switch (layout) {
    case sim::SignalLayout::baseline: return "baseline";
    case sim::SignalLayout::strong_beta: return "strong_beta";
    case sim::SignalLayout::weak_leading: return "weak_leading";
  }
  return "unknown";
}

jsonw::Value cv_to_json(const lasso::CvResult& cv) {
  jsonw::Value out = jsonw::Value::object();
  out.set("lambda_grid", jsonw::Value::number_array(cv.lambda_grid));
  out.set("mean_cv_error", jsonw::Value::number_array(cv.mean_cv_error));
  out.set("se_cv_error", jsonw::Value::number_array(cv.se_cv_error));
  out.set("lambda_min", cv.lambda_min);
  out.set("lambda_chosen", cv.lambda_chosen);
  out.set("fold_assignment", jsonw::Value::int_array(cv.fold_assignment));
  return out;
}

namespace {

jsonw::Value group_names(const std::vector<int>& indices, const std::vector<std::string>& taxa) {
  jsonw::Value out = jsonw::Value::array();
  for (int j : indices) {
    if (j >= 0 && j < static_cast<int>(taxa.size())) {
      out.push(taxa[static_cast<std::size_t>(j)]);
    } else {
      out.push("t" + std::to_string(j + 1));
    }
  }
  return out;
}

jsonw::Value opt(const std::optional<double>& v) {
  return v ? jsonw::Value(*v) : jsonw::Value(nullptr);
}

}  // namespace

jsonw::Value pathway_to_json(const pathway::PathwayResult& result) {
  jsonw::Value out = jsonw::Value::object();
  out.set("schema_version", kSchemaVersion);
  out.set("mode", mode_name(result.mode));
  out.set("status", status_name(result.status));
  out.set("theta_tilde", result.debias.theta_tilde);
  out.set("p_value", result.debias.p_value);
  out.set("sigma_eps_hat", result.debias.sigma_eps_hat);

  jsonw::Value first = jsonw::Value::object();
  first.set("gamma_hat", jsonw::Value::number_array(result.first_stage.gamma_hat));
  first.set("lambda_gamma", result.first_stage.lambda_gamma);
  first.set("support_size", static_cast<std::int64_t>(result.first_stage.support_size));
  first.set("cv", cv_to_json(result.first_stage.cv));
  out.set("first_stage", std::move(first));

  jsonw::Value second = jsonw::Value::object();
  second.set("theta_hat", result.second_stage.theta_hat);
  second.set("beta_hat", jsonw::Value::number_array(result.second_stage.beta_hat));
  second.set("lambda_beta", result.second_stage.lambda_beta);
  second.set("m_hat", jsonw::Value::number_array(result.second_stage.m_hat));
  second.set("cv", cv_to_json(result.second_stage.cv));
  out.set("second_stage", std::move(second));

  jsonw::Value debias = jsonw::Value::object();
  debias.set("z", jsonw::Value::number_array(result.debias.z));
  debias.set("b_hat", jsonw::Value::number_array(result.debias.b_hat));
  debias.set("lambda_z", result.debias.lambda_z);
  debias.set("theta_tilde", result.debias.theta_tilde);
  debias.set("sigma_eps_hat", result.debias.sigma_eps_hat);
  debias.set("score", result.debias.score);
  debias.set("statistic", result.debias.statistic);
  debias.set("p_value", result.debias.p_value);
  debias.set("se", result.debias.se);
  debias.set("z_column_corr", result.debias.z_column_corr);
  debias.set("z_corr_warning", result.debias.z_corr_warning);
  out.set("debias", std::move(debias));

  jsonw::Value thresholded = jsonw::Value::object();
  thresholded.set("gamma_thres", jsonw::Value::number_array(result.thresholded.gamma_thres));
  thresholded.set("beta_thres", jsonw::Value::number_array(result.thresholded.beta_thres));
  thresholded.set("c_gamma", result.thresholded.c_gamma);
  thresholded.set("c_beta", result.thresholded.c_beta);
  out.set("thresholded", std::move(thresholded));

  jsonw::Value groups = jsonw::Value::object();
  groups.set("g1", group_names(result.groups.g1, result.taxa_ids));
  groups.set("g2", group_names(result.groups.g2, result.taxa_ids));
  groups.set("g3", group_names(result.groups.g3, result.taxa_ids));
  groups.set("g4", group_names(result.groups.g4, result.taxa_ids));
  out.set("groups", std::move(groups));

  jsonw::Value seeds = jsonw::Value::object();
  seeds.set("master", result.seeds.master);
  seeds.set("first_stage_cv", result.seeds.first_stage_cv);
  seeds.set("second_stage_cv", result.seeds.second_stage_cv);
  seeds.set("lambda_z_cv", result.seeds.lambda_z_cv);
  seeds.set("variance_cv", result.seeds.variance_cv);
  seeds.set("sample_split", result.seeds.sample_split);
  out.set("seeds", std::move(seeds));

  out.set("taxa_ids", jsonw::Value::string_array(result.taxa_ids));
  out.set("solver_ok", result.solver_ok);
  return out;
}

jsonw::Value summary_to_json(const sim::SimSummary& summary) {
  jsonw::Value out = jsonw::Value::object();
  out.set("n_reps", static_cast<std::int64_t>(summary.n_reps));
  out.set("mean_bias", summary.mean_bias);
  out.set("median_bias", summary.median_bias);
  out.set("rejection_rate", summary.rejection_rate);
  out.set("tpr_beta", opt(summary.tpr_beta));
  out.set("fpr_beta", opt(summary.fpr_beta));
  out.set("tpr_gamma", opt(summary.tpr_gamma));
  out.set("fpr_gamma", opt(summary.fpr_gamma));
  out.set("mean_predictive_correlation", opt(summary.mean_predictive_correlation));
  out.set("all_solver_ok", summary.all_solver_ok);
  out.set("n_degenerate", static_cast<std::int64_t>(summary.n_degenerate));
  return out;
}

jsonw::Value scenario_to_json(const sim::Scenario& s, int n_reps, std::uint64_t master_seed) {
  jsonw::Value out = jsonw::Value::object();
  out.set("p", static_cast<std::int64_t>(s.p));
  out.set("n", static_cast<std::int64_t>(s.n));
  out.set("N", static_cast<std::int64_t>(s.N));
  out.set("theta_star", s.theta_star);
  out.set("rho", s.rho);
  out.set("tau", s.tau);
  out.set("perturbation", perturbation_name(s.perturbation));
  out.set("method", method_name(s.method));
  out.set("layout", layout_name(s.layout));
  out.set("block_size", static_cast<std::int64_t>(s.block_size));
  out.set("alpha", s.alpha);
  out.set("n_reps", static_cast<std::int64_t>(n_reps));
  out.set("master_seed", master_seed);
  return out;
}

std::string screen_csv(std::vector<ScreenRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const ScreenRow& a, const ScreenRow& b) {
    const double pa = a.p_value.value_or(std::numeric_limits<double>::infinity());
    const double pb = b.p_value.value_or(std::numeric_limits<double>::infinity());
    if (pa != pb) return pa < pb;
    return a.metabolite_id < b.metabolite_id;
  });

  std::string out =
      "metabolite_id,status,theta_tilde,p_value,sigma_eps_hat,g1,g2,g3,g4,"
      "predictive_correlation,detail\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string();
  };
  auto icell = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const ScreenRow& r : rows) {
    out += r.metabolite_id;
    out += ',' + r.status;
    out += ',' + cell(r.theta_tilde);
    out += ',' + cell(r.p_value);
    out += ',' + cell(r.sigma_eps_hat);
    out += ',' + icell(r.g1);
    out += ',' + icell(r.g2);
    out += ',' + icell(r.g3);
    out += ',' + icell(r.g4);
    out += ',' + cell(r.predictive_correlation);
    out += ',';
    for (char c : r.detail) out += (c == ',' || c == '\n') ? ' ' : c;
    out += '\n';
  }
  return out;
}

std::string summaries_csv(const std::vector<sim::Scenario>& scenarios,
                          const std::vector<sim::SimSummary>& summaries,
                          const std::vector<int>& n_reps,
                          const std::vector<std::uint64_t>& master_seeds) {
  std::string out =
      "p,n,N,theta_star,rho,tau,perturbation,method,layout,n_reps,master_seed,alpha,"
      "mean_bias,median_bias,rejection_rate,tpr_beta,fpr_beta,tpr_gamma,fpr_gamma,"
      "mean_predictive_correlation,all_solver_ok,n_degenerate\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? csv::format_double(*v) : std::string();
  };
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const sim::Scenario& s = scenarios[i];
    const sim::SimSummary& m = summaries[i];
    out += std::to_string(s.p) + ',' + std::to_string(s.n) + ',' + std::to_string(s.N);
    out += ',' + csv::format_double(s.theta_star) + ',' + csv::format_double(s.rho);
    out += ',' + csv::format_double(s.tau) + ',' + perturbation_name(s.perturbation);
    out += ',' + method_name(s.method) + ',' + layout_name(s.layout);
    out += ',' + std::to_string(n_reps[i]) + ',' + std::to_string(master_seeds[i]);
    out += ',' + csv::format_double(s.alpha);
    out += ',' + csv::format_double(m.mean_bias) + ',' + csv::format_double(m.median_bias);
    out += ',' + csv::format_double(m.rejection_rate);
    out += ',' + cell(m.tpr_beta) + ',' + cell(m.fpr_beta);
    out += ',' + cell(m.tpr_gamma) + ',' + cell(m.fpr_gamma);
    out += ',' + cell(m.mean_predictive_correlation);
    out += std::string(",") + (m.all_solver_ok ? "true" : "false");
    out += ',' + std::to_string(m.n_degenerate) + '\n';
  }
  return out;
}

}  // namespace mmdpath::serialize
