#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mmdpath/pathway.hpp"
#include "mmdpath/types.hpp"

namespace mmdpath::sim {

using core::Matrix;
using core::Vector;

struct GenerativeSpec {
  double theta_star = 0.0;
  Vector beta_star;
  Vector gamma_star;
  double rho = 0.0;  // Cov(eps, delta) with unit variances
  double external_delta_sd = 1.0;

  int p() const { return static_cast<int>(gamma_star.size()); }
  void validate() const;
};

enum class PerturbationKind { none, scale_change, position_change };

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::none;
  double tau = 0.0;
  std::uint64_t rng_seed = 0;
};

struct TruthRecord {
  double theta_star = 0.0;
  Vector beta_star;
  Vector gamma_star;
  Vector gamma_tilde_star;
  Vector eps;    // outcome noise, target
  Vector delta;  // metabolite noise, target
};

struct Cohorts {
  core::TargetDataset target;
  core::ExternalDataset external;
  TruthRecord truth;
};

/// Gaussian design with every row centered to sum zero, matching the geometry
/// of CLR output.
core::DesignMatrix generate_design(int n, int p, std::uint64_t rng_seed);

/// gamma_star + e, where e has exactly 10 nonzero entries of +-tau/10 chosen
/// per the perturbation kind, so ||e||_1 == tau. Scale change draws its 10
/// indices from the first 5 and last 6 support positions of gamma_star;
/// position change uses the 10 indices immediately after the leading support
/// block.
Vector make_perturbation(const Vector& gamma_star, PerturbationKind kind, double tau,
                         std::uint64_t rng_seed);

/// Target: m = X gamma* + delta, y = m theta* + X beta* + eps with
/// (eps, delta) bivariate normal, correlation rho. External: an independent
/// design and m~ = X~ gamma~* + delta~ with iid N(0, external_delta_sd^2).
Cohorts generate_cohorts(const GenerativeSpec& spec, const PerturbationSpec& perturb, int n, int N,
                         std::uint64_t rng_seed);

/// Rates over the support pattern; a rate whose denominator class is empty is
/// reported absent rather than 0/0.
std::pair<std::optional<double>, std::optional<double>> compute_tpr_fpr(const Vector& estimate,
                                                                        const Vector& truth);

core::TargetDataset subsample_rows(const core::TargetDataset& dataset, int m, std::uint64_t rng_seed);
core::ExternalDataset subsample_rows(const core::ExternalDataset& dataset, int m, std::uint64_t rng_seed);

enum class Method { integrative, target_only, sample_split };

enum class SignalLayout {
  baseline,      // gamma: -0.5 x k ... +0.5 x k; beta: 0.1 x k, -0.1 x 3k
  strong_beta,   // gamma as baseline; beta: 0.5 x 2k
  weak_leading,  // gamma: 0.025 x 5 ... 0.25 x 20; beta: 0.1 x 40
};

GenerativeSpec make_generative_spec(SignalLayout layout, int p, int block_size, double theta_star,
                                    double rho);

struct Scenario {
  int p = 100;
  int n = 200;
  int N = 300;
  double theta_star = 0.0;
  double rho = 0.0;
  double tau = 0.0;
  PerturbationKind perturbation = PerturbationKind::none;
  Method method = Method::integrative;
  double alpha = 0.05;
  SignalLayout layout = SignalLayout::baseline;
  int block_size = 5;
  double external_delta_sd = 1.0;
  double split_fraction = 0.5;
  bool track_predictive_correlation = false;
  pathway::PathwayConfig pathway;  // per-replication seed is overwritten
};

struct RepRecord {
  double theta_tilde = 0.0;
  double bias = 0.0;
  double p_value = 1.0;
  double statistic = 0.0;
  bool reject = false;
  std::optional<double> tpr_beta, fpr_beta, tpr_gamma, fpr_gamma;
  std::optional<double> predictive_correlation;
  bool solver_ok = false;
  bool degenerate = false;
  // Thresholded estimates and the generative truth, for selection analyses.
  Vector gamma_thres, beta_thres;
  Vector gamma_star, beta_star;
};

struct SimSummary {
  int n_reps = 0;
  double mean_bias = 0.0;
  double median_bias = 0.0;
  double rejection_rate = 0.0;  // type-I error when theta* = 0, power otherwise
  std::optional<double> tpr_beta, fpr_beta, tpr_gamma, fpr_gamma;
  std::optional<double> mean_predictive_correlation;
  bool all_solver_ok = false;
  int n_degenerate = 0;
};

/// Replication r runs on derive_seed(master_seed, r); slots are written by
/// index, so the summary is bit-identical for any parallelism level.
SimSummary run_replications(const Scenario& scenario, int n_reps, std::uint64_t master_seed,
                            int parallelism, std::vector<RepRecord>* records = nullptr);

}  // namespace mmdpath::sim
