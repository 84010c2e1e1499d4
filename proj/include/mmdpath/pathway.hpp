#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmdpath/lasso.hpp"
#include "mmdpath/types.hpp"

namespace mmdpath::pathway {

using core::Matrix;
using core::Vector;

struct PathwayConfig {
  std::uint64_t seed = 0;
  int cv_folds = 5;
  int variance_folds = 10;
  double c_gamma = 0.1;
  double c_beta = 0.1;
  double corr_budget = 2.0;
  int n_lambdas = 100;
  double lambda_ratio = 0.01;
  double split_fraction = 0.5;
  int min_split_rows = 10;
  bool one_se_rule = false;
  // Documented variant behaviors, off by default.
  bool variance_unsquared = false;          // noise variance as ||r||_2 / (n - s)
  bool p_value_variance_denominator = false;  // divide the test statistic by sigma^2
};

// Sub-stream seeds are derive_seed(config.seed, slot) with fixed slots:
//   0 first-stage CV        1 second-stage CV      2 residual-direction CV
//   3 variance-refit CV     4 sample-split permutation
//   5 predictive-correlation CV (shared by the target and external fits, so
//     identical cohorts give identical folds and a correlation of exactly 1)
enum class SeedSlot : std::uint64_t {
  first_stage_cv = 0,
  second_stage_cv = 1,
  lambda_z_cv = 2,
  variance_cv = 3,
  sample_split = 4,
  pred_corr_cv = 5,
};

struct PathwaySeeds {
  std::uint64_t master = 0;
  std::uint64_t first_stage_cv = 0;
  std::uint64_t second_stage_cv = 0;
  std::uint64_t lambda_z_cv = 0;
  std::uint64_t variance_cv = 0;
  std::uint64_t sample_split = 0;
};

struct FirstStageFit {
  Vector gamma_hat;
  double lambda_gamma = 0.0;
  int support_size = 0;
  lasso::CvResult cv;
  bool converged = false;
};

struct SecondStageFit {
  double theta_hat = 0.0;
  Vector beta_hat;
  double lambda_beta = 0.0;
  Vector m_hat;  // predicted metabolite in integrative mode, observed otherwise
  lasso::CvResult cv;
  bool converged = false;
};

struct DebiasReport {
  Vector z;
  Vector b_hat;
  double lambda_z = 0.0;
  double theta_tilde = 0.0;
  double sigma_eps_hat = 0.0;  // standard deviation scale
  double score = 0.0;          // z'm_hat / ||z||_2
  double statistic = 0.0;      // signed test statistic, N(0,1) under the null
  double p_value = 1.0;
  double se = 0.0;  // sigma_eps_hat * ||z||_2 / |z'm_hat|, null-calibrated
  double z_column_corr = 0.0;  // max_j |z'x_j| / ||z||_2
  bool z_corr_warning = false;
  bool converged = false;
};

struct ThresholdedCoefficients {
  Vector gamma_thres;
  Vector beta_thres;
  double c_gamma = 0.0;
  double c_beta = 0.0;
};

struct GroupAssignment {
  std::vector<int> g1;  // beta != 0 and gamma != 0: confounding microbes
  std::vector<int> g2;  // beta == 0 and gamma != 0: instrumental microbes
  std::vector<int> g3;  // beta != 0 and gamma == 0: direct-effect microbes
  std::vector<int> g4;  // both zero
};

enum class PathwayMode { integrative, target_only, sample_split };
enum class PathwayStatus { ok, degenerate_first_stage };

struct PathwayResult {
  PathwayMode mode = PathwayMode::integrative;
  PathwayStatus status = PathwayStatus::ok;
  FirstStageFit first_stage;
  SecondStageFit second_stage;
  DebiasReport debias;
  ThresholdedCoefficients thresholded;
  GroupAssignment groups;
  PathwaySeeds seeds;
  std::vector<std::string> taxa_ids;
  bool solver_ok = false;  // every CV-selected fit converged with a passing KKT certificate
};

FirstStageFit fit_first_stage(const core::ExternalDataset& external, int cv_folds,
                              std::uint64_t rng_seed, const PathwayConfig& config = {});

Vector predict_metabolite(const FirstStageFit& first_stage, const core::DesignMatrix& target_design);

SecondStageFit fit_second_stage(const core::TargetDataset& target, const Vector& m_hat,
                                int cv_folds, std::uint64_t rng_seed,
                                const PathwayConfig& config = {});

/// b_hat from the l1-penalized regression of m_hat on the design at lambda_z,
/// and the residual direction z = m_hat - X b_hat.
std::pair<Vector, Vector> residualize(const Vector& m_hat, const core::DesignMatrix& target_design,
                                      double lambda_z);

struct LambdaZSelection {
  double lambda_z = 0.0;
  bool budget_met = true;
};

/// CV-chosen lambda for the residual regression, escalated geometrically
/// (factor 1.2) until max_j |z'x_j|/||z||_2 <= corr_budget * sqrt(log p) or
/// lambda_max is reached. Never fails: an unmet budget only sets a warning.
LambdaZSelection select_lambda_z(const Vector& m_hat, const core::DesignMatrix& target_design,
                                 int cv_folds, std::uint64_t rng_seed, double corr_budget,
                                 const PathwayConfig& config = {});

double debias_theta(const SecondStageFit& second_stage, const Vector& z,
                    const core::TargetDataset& target);

/// Noise variance ||y - m_hat*theta_hat - X beta_cv||^2 / (n - ||beta_cv||_0)
/// with beta_cv refit at a lambda tuned by variance_folds-fold CV (theta kept
/// unpenalized in the refit). Returns the variance scale. refit_certified, if
/// given, reports whether the refit converged with a passing KKT check.
double estimate_noise_variance(const core::TargetDataset& target, const Vector& m_hat,
                               double theta_hat, std::uint64_t cv_seed,
                               const PathwayConfig& config = {}, bool* refit_certified = nullptr);

/// Assembles the inference report: statistic, two-sided p-value, diagnostic se.
DebiasReport test_theta(const SecondStageFit& second_stage, const Vector& z, const Vector& b_hat,
                        double lambda_z, double theta_tilde, double sigma_eps_sq,
                        const core::TargetDataset& target, const PathwayConfig& config = {});

ThresholdedCoefficients threshold_coefficients(const Vector& gamma_hat, const Vector& beta_hat,
                                               double c_gamma, double c_beta);

GroupAssignment assign_groups(const ThresholdedCoefficients& thresholded);

PathwayResult run_integrative(const core::TargetDataset& target,
                              const core::ExternalDataset& external, const PathwayConfig& config);

PathwayResult run_target_only(const core::TargetDataset& target, const PathwayConfig& config);

PathwayResult run_sample_split(const core::TargetDataset& target, double split_fraction,
                               std::uint64_t rng_seed, const PathwayConfig& config);

/// Pearson correlation between X*gamma_target and X*gamma_external, both
/// fitted vectors evaluated on the target design.
double predictive_correlation(const core::TargetDataset& target_proxy,
                              const core::ExternalDataset& external, const PathwayConfig& config);

}  // namespace mmdpath::pathway
