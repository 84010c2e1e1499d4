#include "mmdpath/pathway.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmdpath/rng.hpp"
#include "mmdpath/stats.hpp"

namespace mmdpath::pathway {

namespace {

std::uint64_t slot_seed(const PathwayConfig& config, SeedSlot slot) {
  return rng::derive_seed(config.seed, static_cast<std::uint64_t>(slot));
}

template <typename F>
auto tagged(const char* stage, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
}

lasso::PenalizedProblem penalized_regression(const Vector& m, const Matrix& X) {
  lasso::PenalizedProblem p;
  p.response = m;
  p.design = X;
  p.penalty_factor = Vector::Ones(X.cols());
  return p;
}

lasso::PenalizedProblem joint_regression(const Vector& y, const Vector& m_hat,
                                                   const Matrix& X) {
  lasso::PenalizedProblem p;
  p.response = y;
  p.design.resize(X.rows(), X.cols() + 1);
  p.design.col(0) = m_hat;
  p.design.rightCols(X.cols()) = X;
  p.penalty_factor = Vector::Ones(X.cols() + 1);
  p.penalty_factor(0) = 0.0;
  return p;
}

int support_size(const Vector& w) {
  int s = 0;
  for (int j = 0; j < w.size(); ++j) {
    if (w(j) != 0.0) ++s;
  }
  return s;
}

double max_column_correlation(const Vector& z, const Matrix& X) {
  const double norm = z.norm();
  if (norm == 0.0) return 0.0;
  return (X.transpose() * z).cwiseAbs().maxCoeff() / norm;
}

}  // namespace

FirstStageFit fit_first_stage(const core::ExternalDataset& external, int cv_folds,
                              std::uint64_t rng_seed, const PathwayConfig& config) {
  external.validate();
  const auto problem = penalized_regression(external.metabolite, external.design.values);
  const auto result = lasso::cv_fit(problem, cv_folds, config.n_lambdas, config.lambda_ratio,
                                    rng_seed, config.one_se_rule);
  FirstStageFit fit;
  fit.gamma_hat = result.fit.coefficients;
  fit.lambda_gamma = result.cv.lambda_chosen;
  fit.support_size = support_size(fit.gamma_hat);
  fit.cv = result.cv;
  fit.converged = result.fit.converged;
  return fit;
}

Vector predict_metabolite(const FirstStageFit& first_stage, const core::DesignMatrix& target_design) {
  if (first_stage.gamma_hat.size() != target_design.values.cols()) {
    throw std::invalid_argument("predict_metabolite: coefficient length does not match design");
  }
  return target_design.values * first_stage.gamma_hat;
}

SecondStageFit fit_second_stage(const core::TargetDataset& target, const Vector& m_hat,
                                int cv_folds, std::uint64_t rng_seed,
                                const PathwayConfig& config) {
  target.validate();
  if (m_hat.size() != target.design.values.rows()) {
    throw std::invalid_argument("fit_second_stage: m_hat length does not match design rows");
  }
  if (m_hat.cwiseAbs().maxCoeff() == 0.0) {
    throw std::runtime_error(
        "fit_second_stage: degenerate first stage: predicted metabolite is constant zero");
  }
  const auto problem = joint_regression(target.outcome, m_hat, target.design.values);
  const auto result = lasso::cv_fit(problem, cv_folds, config.n_lambdas, config.lambda_ratio,
                                    rng_seed, config.one_se_rule);
  SecondStageFit fit;
  fit.theta_hat = result.fit.coefficients(0);
  fit.beta_hat = result.fit.coefficients.tail(target.design.values.cols());
  fit.lambda_beta = result.cv.lambda_chosen;
  fit.m_hat = m_hat;
  fit.cv = result.cv;
  fit.converged = result.fit.converged;
  return fit;
}

std::pair<Vector, Vector> residualize(const Vector& m_hat, const core::DesignMatrix& target_design,
                                      double lambda_z) {
  if (!(lambda_z > 0.0)) {
    throw std::invalid_argument("residualize: lambda_z must be positive");
  }
  auto problem = penalized_regression(m_hat, target_design.values);
  problem.lambda = lambda_z;
  const auto fit = lasso::solve(problem);
  Vector z = m_hat - target_design.values * fit.coefficients;
  if (z.norm() == 0.0) {
    throw std::runtime_error("residualize: residual direction degenerate; increase lambda_z");
  }
  return {std::move(z), fit.coefficients};
}

LambdaZSelection select_lambda_z(const Vector& m_hat, const core::DesignMatrix& target_design,
                                 int cv_folds, std::uint64_t rng_seed, double corr_budget,
                                 const PathwayConfig& config) {
  if (!(corr_budget > 0.0)) {
    throw std::invalid_argument("select_lambda_z: corr_budget must be positive");
  }
  const auto base = penalized_regression(m_hat, target_design.values);
  const auto cv = lasso::cross_validate(base, cv_folds, config.n_lambdas, config.lambda_ratio,
                                        rng_seed, config.one_se_rule);
  const double lambda_max = cv.lambda_grid(0);
  const double bound =
      corr_budget * std::sqrt(std::log(static_cast<double>(target_design.values.cols())));

  double lambda_z = cv.lambda_chosen;
  for (;;) {
    const auto [z, b_hat] = residualize(m_hat, target_design, lambda_z);
    (void)b_hat;
    if (max_column_correlation(z, target_design.values) <= bound) {
      return {lambda_z, true};
    }
    if (lambda_z >= lambda_max) return {lambda_z, false};
    lambda_z = std::min(lambda_z * 1.2, lambda_max);
  }
}

double debias_theta(const SecondStageFit& second_stage, const Vector& z,
                    const core::TargetDataset& target) {
  const Vector& m_hat = second_stage.m_hat;
  const double zm = z.dot(m_hat);
  if (std::abs(zm) < 1e-12 * z.norm() * m_hat.norm()) {
    throw std::runtime_error("debias_theta: weak residual leverage; z nearly orthogonal to m_hat");
  }
  const Vector residual = target.outcome - m_hat * second_stage.theta_hat -
                          target.design.values * second_stage.beta_hat;
  return second_stage.theta_hat + z.dot(residual) / zm;
}

double estimate_noise_variance(const core::TargetDataset& target, const Vector& m_hat,
                               double theta_hat, std::uint64_t cv_seed,
                               const PathwayConfig& config, bool* refit_certified) {
  const auto problem = joint_regression(target.outcome, m_hat, target.design.values);
  const auto refit = lasso::cv_fit(problem, config.variance_folds, config.n_lambdas,
                                   config.lambda_ratio, cv_seed, config.one_se_rule);
  if (refit_certified) *refit_certified = refit.fit.converged;
  const Vector beta_cv = refit.fit.coefficients.tail(target.design.values.cols());
  const int s = support_size(beta_cv);
  const int n = static_cast<int>(target.outcome.size());
  if (n <= s) {
    throw std::runtime_error("estimate_noise_variance: saturated model; variance not estimable");
  }
  const Vector residual =
      target.outcome - m_hat * theta_hat - target.design.values * beta_cv;
  if (config.variance_unsquared) {
    return residual.norm() / (n - s);  // unsquared-norm variant, exposed for comparison
  }
  return residual.squaredNorm() / (n - s);
}

DebiasReport test_theta(const SecondStageFit& second_stage, const Vector& z, const Vector& b_hat,
                        double lambda_z, double theta_tilde, double sigma_eps_sq,
                        const core::TargetDataset& target, const PathwayConfig& config) {
  DebiasReport report;
  report.z = z;
  report.b_hat = b_hat;
  report.lambda_z = lambda_z;
  report.theta_tilde = theta_tilde;
  report.sigma_eps_hat = std::sqrt(sigma_eps_sq);
  const double z_norm = z.norm();
  const double zm = z.dot(second_stage.m_hat);
  report.score = z_norm > 0.0 ? zm / z_norm : 0.0;
  report.z_column_corr = max_column_correlation(z, target.design.values);

  const double denominator =
      config.p_value_variance_denominator ? sigma_eps_sq : report.sigma_eps_hat;
  if (denominator == 0.0) {
    report.statistic = report.score * theta_tilde == 0.0
                           ? 0.0
                           : std::numeric_limits<double>::infinity();
    report.p_value = 0.0;
    report.se = 0.0;
    return report;
  }
  report.statistic = report.score * theta_tilde / denominator;
  report.p_value = stats::two_sided_p_value(report.statistic);
  report.se = zm != 0.0 ? report.sigma_eps_hat * z_norm / std::abs(zm) : 0.0;
  return report;
}

ThresholdedCoefficients threshold_coefficients(const Vector& gamma_hat, const Vector& beta_hat,
                                               double c_gamma, double c_beta) {
  if (c_gamma < 0.0 || c_beta < 0.0) {
    throw std::invalid_argument("threshold_coefficients: thresholds must be nonnegative");
  }
  ThresholdedCoefficients out;
  out.c_gamma = c_gamma;
  out.c_beta = c_beta;
  out.gamma_thres = gamma_hat;
  out.beta_thres = beta_hat;
  for (int j = 0; j < gamma_hat.size(); ++j) {
    if (std::abs(gamma_hat(j)) < c_gamma) out.gamma_thres(j) = 0.0;
  }
  for (int j = 0; j < beta_hat.size(); ++j) {
    if (std::abs(beta_hat(j)) < c_beta) out.beta_thres(j) = 0.0;
  }
  return out;
}

GroupAssignment assign_groups(const ThresholdedCoefficients& thresholded) {
  if (thresholded.gamma_thres.size() != thresholded.beta_thres.size()) {
    throw std::invalid_argument("assign_groups: coefficient vectors differ in length");
  }
  GroupAssignment groups;
  for (int j = 0; j < thresholded.gamma_thres.size(); ++j) {
    const bool gamma_on = thresholded.gamma_thres(j) != 0.0;
    const bool beta_on = thresholded.beta_thres(j) != 0.0;
    if (beta_on && gamma_on) {
      groups.g1.push_back(j);
    } else if (!beta_on && gamma_on) {
      groups.g2.push_back(j);
    } else if (beta_on) {
      groups.g3.push_back(j);
    } else {
      groups.g4.push_back(j);
    }
  }
  return groups;
}

namespace {

// Shared back half of the pipeline once a first stage and the working
// metabolite vector are in hand.
PathwayResult run_pipeline(const core::TargetDataset& target, FirstStageFit first_stage,
                           const Vector& m_used, PathwayMode mode, const PathwayConfig& config) {
  PathwayResult result;
  result.mode = mode;
  result.seeds.master = config.seed;
  result.seeds.first_stage_cv = slot_seed(config, SeedSlot::first_stage_cv);
  result.seeds.second_stage_cv = slot_seed(config, SeedSlot::second_stage_cv);
  result.seeds.lambda_z_cv = slot_seed(config, SeedSlot::lambda_z_cv);
  result.seeds.variance_cv = slot_seed(config, SeedSlot::variance_cv);
  result.taxa_ids = target.design.taxa_ids;
  result.first_stage = std::move(first_stage);

  const int n = static_cast<int>(target.outcome.size());
  const int p = static_cast<int>(target.design.values.cols());

  if (m_used.cwiseAbs().maxCoeff() == 0.0) {
    // No microbially-regulated signal: emit the typed outcome instead of
    // failing, so batch screening can keep going. The direct effects are
    // still fit so the grouping stays informative.
    result.status = PathwayStatus::degenerate_first_stage;
    auto direct = penalized_regression(target.outcome, target.design.values);
    const auto direct_fit =
        tagged("second_stage", [&] {
          return lasso::cv_fit(direct, config.cv_folds, config.n_lambdas, config.lambda_ratio,
                               result.seeds.second_stage_cv, config.one_se_rule);
        });
    result.second_stage.theta_hat = 0.0;
    result.second_stage.beta_hat = direct_fit.fit.coefficients;
    result.second_stage.lambda_beta = direct_fit.cv.lambda_chosen;
    result.second_stage.m_hat = Vector::Zero(n);
    result.second_stage.cv = direct_fit.cv;
    result.second_stage.converged = direct_fit.fit.converged;

    const int s = support_size(direct_fit.fit.coefficients);
    result.debias.z = Vector::Zero(n);
    result.debias.b_hat = Vector::Zero(p);
    result.debias.theta_tilde = 0.0;
    result.debias.p_value = 1.0;
    result.debias.sigma_eps_hat =
        n > s ? std::sqrt((target.outcome - target.design.values * direct_fit.fit.coefficients)
                              .squaredNorm() /
                          (n - s))
              : 0.0;
    result.debias.converged = true;

    result.thresholded = threshold_coefficients(result.first_stage.gamma_hat,
                                                result.second_stage.beta_hat, config.c_gamma,
                                                config.c_beta);
    result.groups = assign_groups(result.thresholded);
    result.solver_ok = result.first_stage.converged && result.second_stage.converged;
    return result;
  }

  result.second_stage = tagged("second_stage", [&] {
    return fit_second_stage(target, m_used, config.cv_folds, result.seeds.second_stage_cv, config);
  });

  const auto selection = tagged("residualize", [&] {
    return select_lambda_z(m_used, target.design, config.cv_folds, result.seeds.lambda_z_cv,
                           config.corr_budget, config);
  });
  auto [z, b_hat] = tagged("residualize", [&] {
    return residualize(m_used, target.design, selection.lambda_z);
  });

  const double theta_tilde = tagged("debias", [&] {
    return debias_theta(result.second_stage, z, target);
  });

  bool variance_certified = false;
  const double sigma_sq = tagged("noise_variance", [&] {
    return estimate_noise_variance(target, m_used, result.second_stage.theta_hat,
                                   result.seeds.variance_cv, config, &variance_certified);
  });

  result.debias = test_theta(result.second_stage, z, b_hat, selection.lambda_z, theta_tilde,
                             sigma_sq, target, config);
  result.debias.z_corr_warning = !selection.budget_met;
  result.debias.converged = true;

  result.thresholded =
      threshold_coefficients(result.first_stage.gamma_hat, result.second_stage.beta_hat,
                             config.c_gamma, config.c_beta);
  result.groups = assign_groups(result.thresholded);

  // The residual-direction fit at the selected lambda_z also carries the
  // certificate: recheck it from the raw design.
  const double z_fit_violation =
      lasso::kkt_violation(target.design.values, m_used, Vector::Ones(p), selection.lambda_z,
                           b_hat);
  result.solver_ok = result.first_stage.converged && result.second_stage.converged &&
                     variance_certified && z_fit_violation <= lasso::kKktTol;
  return result;
}

}  // namespace

PathwayResult run_integrative(const core::TargetDataset& target,
                              const core::ExternalDataset& external, const PathwayConfig& config) {
  target.validate();
  external.validate();
  if (target.design.taxa_ids != external.design.taxa_ids) {
    throw std::invalid_argument("run_integrative: cohorts are not aligned; call align_cohorts first");
  }

  auto first_stage = tagged("first_stage", [&] {
    return fit_first_stage(external, config.cv_folds,
                           slot_seed(config, SeedSlot::first_stage_cv), config);
  });
  const Vector m_hat = tagged("predict", [&] {
    return predict_metabolite(first_stage, target.design);
  });
  return run_pipeline(target, std::move(first_stage), m_hat, PathwayMode::integrative, config);
}

PathwayResult run_target_only(const core::TargetDataset& target, const PathwayConfig& config) {
  target.validate();
  if (!target.metabolite) {
    throw std::runtime_error("run_target_only: target-only requires observed metabolite");
  }
  core::ExternalDataset self;
  self.design = target.design;
  self.metabolite = *target.metabolite;
  auto first_stage = tagged("first_stage", [&] {
    return fit_first_stage(self, config.cv_folds, slot_seed(config, SeedSlot::first_stage_cv),
                           config);
  });
  return run_pipeline(target, std::move(first_stage), *target.metabolite,
                      PathwayMode::target_only, config);
}

PathwayResult run_sample_split(const core::TargetDataset& target, double split_fraction,
                               std::uint64_t rng_seed, const PathwayConfig& config) {
  target.validate();
  if (!target.metabolite) {
    throw std::runtime_error("run_sample_split: requires observed metabolite");
  }
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw std::invalid_argument("run_sample_split: split_fraction must be in (0,1)");
  }
  const int n = static_cast<int>(target.outcome.size());
  const int n_external = static_cast<int>(std::llround(split_fraction * n));
  const int n_target = n - n_external;
  const int min_rows = std::max(config.min_split_rows, 2);
  if (n_external < min_rows || n_target < min_rows) {
    throw std::runtime_error("run_sample_split: halves too small");
  }

  rng::SplitMix64 gen(rng_seed);
  std::vector<int> perm = gen.permutation(n);
  std::vector<int> external_rows(perm.begin(), perm.begin() + n_external);
  std::vector<int> target_rows(perm.begin() + n_external, perm.end());
  std::sort(external_rows.begin(), external_rows.end());
  std::sort(target_rows.begin(), target_rows.end());

  core::ExternalDataset pseudo_external;
  pseudo_external.design.taxa_ids = target.design.taxa_ids;
  pseudo_external.design.centered = target.design.centered;
  pseudo_external.design.values.resize(n_external, target.design.values.cols());
  pseudo_external.metabolite.resize(n_external);
  for (int i = 0; i < n_external; ++i) {
    pseudo_external.design.values.row(i) = target.design.values.row(external_rows[static_cast<std::size_t>(i)]);
    pseudo_external.metabolite(i) = (*target.metabolite)(external_rows[static_cast<std::size_t>(i)]);
  }

  core::TargetDataset new_target;
  new_target.design.taxa_ids = target.design.taxa_ids;
  new_target.design.centered = target.design.centered;
  new_target.design.values.resize(n_target, target.design.values.cols());
  new_target.outcome.resize(n_target);
  for (int i = 0; i < n_target; ++i) {
    new_target.design.values.row(i) = target.design.values.row(target_rows[static_cast<std::size_t>(i)]);
    new_target.outcome(i) = target.outcome(target_rows[static_cast<std::size_t>(i)]);
  }

  PathwayResult result = run_integrative(new_target, pseudo_external, config);
  result.mode = PathwayMode::sample_split;
  result.seeds.sample_split = rng_seed;
  return result;
}

double predictive_correlation(const core::TargetDataset& target_proxy,
                              const core::ExternalDataset& external, const PathwayConfig& config) {
  target_proxy.validate();
  external.validate();
  if (!target_proxy.metabolite) {
    throw std::runtime_error(
        "predictive_correlation: proxy metabolite must be observed in both cohorts");
  }
  if (target_proxy.design.values.cols() != external.design.values.cols()) {
    throw std::invalid_argument("predictive_correlation: cohorts differ in taxa");
  }

  const std::uint64_t cv_seed = slot_seed(config, SeedSlot::pred_corr_cv);
  const auto target_problem =
      penalized_regression(*target_proxy.metabolite, target_proxy.design.values);
  const auto target_fit = lasso::cv_fit(target_problem, config.cv_folds, config.n_lambdas,
                                        config.lambda_ratio, cv_seed, config.one_se_rule);
  const auto external_problem = penalized_regression(external.metabolite, external.design.values);
  const auto external_fit = lasso::cv_fit(external_problem, config.cv_folds, config.n_lambdas,
                                          config.lambda_ratio, cv_seed, config.one_se_rule);

  // Both coefficient vectors are evaluated on the target design so the fitted
  // vectors live in the same space.
  const Vector fitted_target = target_proxy.design.values * target_fit.fit.coefficients;
  const Vector fitted_external = target_proxy.design.values * external_fit.fit.coefficients;
  return stats::pearson_correlation(fitted_target, fitted_external);
}

}  // namespace mmdpath::pathway
