#include "mmdpath/sim.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "mmdpath/parallel.hpp"
#include "mmdpath/rng.hpp"
#include "mmdpath/stats.hpp"

namespace mmdpath::sim {

void GenerativeSpec::validate() const {
  if (gamma_star.size() < 1) throw std::invalid_argument("gamma_star is empty");
  if (beta_star.size() != gamma_star.size()) {
    throw std::invalid_argument("beta_star and gamma_star differ in length");
  }
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("rho must lie in (-1, 1)");
  }
  if (!(external_delta_sd > 0.0)) {
    throw std::invalid_argument("external_delta_sd must be positive");
  }
}

core::DesignMatrix generate_design(int n, int p, std::uint64_t rng_seed) {
  if (n < 1 || p < 1) throw std::invalid_argument("generate_design: n and p must be positive");
  rng::SplitMix64 gen(rng_seed);
  core::DesignMatrix out;
  out.centered = true;
  out.values.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) out.values(i, j) = gen.next_normal();
    out.values.row(i).array() -= out.values.row(i).mean();
  }
  out.taxa_ids.reserve(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) out.taxa_ids.push_back("t" + std::to_string(j + 1));
  return out;
}

Vector make_perturbation(const Vector& gamma_star, PerturbationKind kind, double tau,
                         std::uint64_t rng_seed) {
  if (tau < 0.0) throw std::invalid_argument("make_perturbation: tau must be nonnegative");
  Vector out = gamma_star;
  if (kind == PerturbationKind::none || tau == 0.0) return out;

  const int p = static_cast<int>(gamma_star.size());
  std::vector<int> support;
  for (int j = 0; j < p; ++j) {
    if (gamma_star(j) != 0.0) support.push_back(j);
  }

  std::vector<int> chosen;
  rng::SplitMix64 gen(rng_seed);
  if (kind == PerturbationKind::scale_change) {
    std::set<int> candidates;
    const int head = std::min<int>(5, static_cast<int>(support.size()));
    const int tail = std::min<int>(6, static_cast<int>(support.size()));
    for (int i = 0; i < head; ++i) candidates.insert(support[static_cast<std::size_t>(i)]);
    for (int i = 0; i < tail; ++i) {
      candidates.insert(support[support.size() - 1 - static_cast<std::size_t>(i)]);
    }
    std::vector<int> pool(candidates.begin(), candidates.end());
    if (pool.size() < 10) {
      throw std::invalid_argument("make_perturbation: scale change needs 10 candidate indices");
    }
    if (pool.size() == 10) {
      chosen = pool;
    } else {
      const auto picks = gen.sample_without_replacement(static_cast<int>(pool.size()), 10);
      for (int i : picks) chosen.push_back(pool[static_cast<std::size_t>(i)]);
    }
  } else {
    if (support.empty()) {
      throw std::invalid_argument("make_perturbation: position change needs a leading support block");
    }
    int block_end = support[0];
    for (std::size_t i = 1; i < support.size() && support[i] == block_end + 1; ++i) {
      block_end = support[i];
    }
    if (block_end + 10 >= p) {
      throw std::invalid_argument("make_perturbation: designated index set exceeds p");
    }
    for (int j = block_end + 1; j <= block_end + 10; ++j) chosen.push_back(j);
  }

  const double magnitude = tau / 10.0;
  for (int j : chosen) {
    const double sign = gen.next_below(2) == 0 ? -1.0 : 1.0;
    out(j) += sign * magnitude;
  }
  return out;
}

Cohorts generate_cohorts(const GenerativeSpec& spec, const PerturbationSpec& perturb, int n, int N,
                         std::uint64_t rng_seed) {
  spec.validate();
  const int p = spec.p();

  Cohorts out;
  out.target.design = generate_design(n, p, rng::derive_seed(rng_seed, 0));
  out.external.design = generate_design(N, p, rng::derive_seed(rng_seed, 1));

  Vector gamma_tilde =
      make_perturbation(spec.gamma_star, perturb.kind, perturb.tau, perturb.rng_seed);
  if (perturb.kind != PerturbationKind::none) {
    const double realized = (gamma_tilde - spec.gamma_star).lpNorm<1>();
    if (std::abs(realized - perturb.tau) > 1e-9) {
      throw std::logic_error("generate_cohorts: realized perturbation misses tau");
    }
  }

  rng::SplitMix64 noise(rng::derive_seed(rng_seed, 3));
  Vector eps(n), delta(n);
  for (int i = 0; i < n; ++i) {
    const auto [e, d] = noise.next_bivariate_normal(spec.rho);
    eps(i) = e;
    delta(i) = d;
  }
  const Vector m = out.target.design.values * spec.gamma_star + delta;
  out.target.metabolite = m;
  out.target.outcome = m * spec.theta_star + out.target.design.values * spec.beta_star + eps;

  rng::SplitMix64 external_noise(rng::derive_seed(rng_seed, 4));
  Vector delta_tilde(N);
  for (int i = 0; i < N; ++i) delta_tilde(i) = spec.external_delta_sd * external_noise.next_normal();
  out.external.metabolite = out.external.design.values * gamma_tilde + delta_tilde;

  out.truth.theta_star = spec.theta_star;
  out.truth.beta_star = spec.beta_star;
  out.truth.gamma_star = spec.gamma_star;
  out.truth.gamma_tilde_star = std::move(gamma_tilde);
  out.truth.eps = std::move(eps);
  out.truth.delta = std::move(delta);
  return out;
}

std::pair<std::optional<double>, std::optional<double>> compute_tpr_fpr(const Vector& estimate,
                                                                        const Vector& truth) {
  if (estimate.size() != truth.size()) {
    throw std::invalid_argument("compute_tpr_fpr: length mismatch");
  }
  int true_nonzero = 0, true_zero = 0, hits = 0, false_hits = 0;
  for (int j = 0; j < truth.size(); ++j) {
    if (truth(j) != 0.0) {
      ++true_nonzero;
      if (estimate(j) != 0.0) ++hits;
    } else {
      ++true_zero;
      if (estimate(j) != 0.0) ++false_hits;
    }
  }
  std::optional<double> tpr, fpr;
  if (true_nonzero > 0) tpr = static_cast<double>(hits) / true_nonzero;
  if (true_zero > 0) fpr = static_cast<double>(false_hits) / true_zero;
  return {tpr, fpr};
}

namespace {

std::vector<int> subsample_indices(int rows, int m, std::uint64_t rng_seed) {
  if (m > rows) throw std::invalid_argument("subsample_rows: m exceeds row count");
  if (m < 1) throw std::invalid_argument("subsample_rows: m must be positive");
  rng::SplitMix64 gen(rng_seed);
  return gen.sample_without_replacement(rows, m);
}

core::DesignMatrix take_rows(const core::DesignMatrix& d, const std::vector<int>& rows) {
  core::DesignMatrix out;
  out.taxa_ids = d.taxa_ids;
  out.centered = d.centered;
  out.values.resize(static_cast<int>(rows.size()), d.values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.values.row(static_cast<int>(i)) = d.values.row(rows[i]);
  }
  return out;
}

Vector take_entries(const Vector& v, const std::vector<int>& rows) {
  Vector out(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out(static_cast<int>(i)) = v(rows[i]);
  return out;
}

}  // namespace

core::TargetDataset subsample_rows(const core::TargetDataset& dataset, int m, std::uint64_t rng_seed) {
  const auto rows = subsample_indices(static_cast<int>(dataset.outcome.size()), m, rng_seed);
  core::TargetDataset out;
  out.design = take_rows(dataset.design, rows);
  out.outcome = take_entries(dataset.outcome, rows);
  if (dataset.metabolite) out.metabolite = take_entries(*dataset.metabolite, rows);
  return out;
}

core::ExternalDataset subsample_rows(const core::ExternalDataset& dataset, int m, std::uint64_t rng_seed) {
  const auto rows = subsample_indices(static_cast<int>(dataset.metabolite.size()), m, rng_seed);
  core::ExternalDataset out;
  out.design = take_rows(dataset.design, rows);
  out.metabolite = take_entries(dataset.metabolite, rows);
  return out;
}

GenerativeSpec make_generative_spec(SignalLayout layout, int p, int block_size, double theta_star,
                                    double rho) {
  if (block_size < 1) throw std::invalid_argument("block_size must be positive");
  GenerativeSpec spec;
  spec.theta_star = theta_star;
  spec.rho = rho;
  spec.gamma_star = Vector::Zero(p);
  spec.beta_star = Vector::Zero(p);
  const int k = block_size;
  switch (layout) {
    case SignalLayout::baseline: {
      // The leading gamma block (2k) spans the positive beta block (k) and
      // the first k of the negative one, so the confounder group is
      // sign-balanced and G1/G2/G3 all have 2k members.
      if (p < 6 * k) throw std::invalid_argument("baseline layout needs p >= 6k");
      for (int j = 0; j < 2 * k; ++j) spec.gamma_star(j) = -0.5;
      for (int j = p - 2 * k; j < p; ++j) spec.gamma_star(j) = 0.5;
      for (int j = 0; j < k; ++j) spec.beta_star(j) = 0.1;
      for (int j = k; j < 4 * k; ++j) spec.beta_star(j) = -0.1;
      break;
    }
    case SignalLayout::strong_beta: {
      // Strong, equal-magnitude signals with disjoint supports. Overlapping
      // supports at matched magnitudes put the second-stage objective on an
      // exactly flat l1 ridge ((theta, beta) vs (theta + t, beta - t*gamma)),
      // leaving the shared coefficients undetermined, so the selection
      // scenario keeps them apart.
      if (p < 4 * k) throw std::invalid_argument("strong_beta layout needs p >= 4k");
      for (int j = 0; j < k; ++j) spec.gamma_star(j) = -0.5;
      for (int j = p - k; j < p; ++j) spec.gamma_star(j) = 0.5;
      for (int j = k; j < 3 * k; ++j) spec.beta_star(j) = 0.5;
      break;
    }
    case SignalLayout::weak_leading: {
      // Weak leading gamma block (pinned at 5 entries so the scale-change
      // candidate set and the position-change indices keep their meaning at
      // any p), a stronger trailing block of 2k, and sign-balanced beta over
      // the leading 4k. Row-centered designs leave every column pair with a
      // -1/p correlation, so a uniform-sign beta block would couple the
      // shrinkage error into the residual direction as a systematic bias;
      // balancing the signs cancels it, as in the baseline layout.
      if (p < 7 * k) throw std::invalid_argument("weak_leading layout needs p >= 7k");
      for (int j = 0; j < 5; ++j) spec.gamma_star(j) = 0.025;
      for (int j = p - 2 * k; j < p; ++j) spec.gamma_star(j) = 0.25;
      for (int j = 0; j < 2 * k; ++j) spec.beta_star(j) = 0.1;
      for (int j = 2 * k; j < 4 * k; ++j) spec.beta_star(j) = -0.1;
      break;
    }
  }
  return spec;
}

SimSummary run_replications(const Scenario& scenario, int n_reps, std::uint64_t master_seed,
                            int parallelism, std::vector<RepRecord>* records) {
  if (n_reps < 1) throw std::invalid_argument("run_replications: n_reps must be positive");

  const GenerativeSpec spec = make_generative_spec(scenario.layout, scenario.p,
                                                   scenario.block_size, scenario.theta_star,
                                                   scenario.rho);
  GenerativeSpec spec_with_sd = spec;
  spec_with_sd.external_delta_sd = scenario.external_delta_sd;

  std::vector<RepRecord> slots(static_cast<std::size_t>(n_reps));
  parallel::for_each_index(n_reps, parallelism, [&](int r) {
    const std::uint64_t rep_seed = rng::derive_seed(master_seed, static_cast<std::uint64_t>(r));
    try {
      PerturbationSpec perturb;
      perturb.kind = scenario.perturbation;
      perturb.tau = scenario.tau;
      perturb.rng_seed = rng::derive_seed(rep_seed, 100);

      const Cohorts cohorts =
          generate_cohorts(spec_with_sd, perturb, scenario.n, scenario.N, rng::derive_seed(rep_seed, 0));

      pathway::PathwayConfig config = scenario.pathway;
      config.seed = rng::derive_seed(rep_seed, 1);

      pathway::PathwayResult result;
      switch (scenario.method) {
        case Method::integrative:
          result = pathway::run_integrative(cohorts.target, cohorts.external, config);
          break;
        case Method::target_only:
          result = pathway::run_target_only(cohorts.target, config);
          break;
        case Method::sample_split:
          result = pathway::run_sample_split(cohorts.target, scenario.split_fraction,
                                             rng::derive_seed(rep_seed, 2), config);
          break;
      }

      RepRecord rec;
      rec.theta_tilde = result.debias.theta_tilde;
      rec.bias = result.debias.theta_tilde - scenario.theta_star;
      rec.p_value = result.debias.p_value;
      rec.statistic = result.debias.statistic;
      rec.reject = result.debias.p_value < scenario.alpha;
      rec.degenerate = result.status == pathway::PathwayStatus::degenerate_first_stage;
      rec.solver_ok = result.solver_ok;
      std::tie(rec.tpr_beta, rec.fpr_beta) =
          compute_tpr_fpr(result.thresholded.beta_thres, cohorts.truth.beta_star);
      std::tie(rec.tpr_gamma, rec.fpr_gamma) =
          compute_tpr_fpr(result.thresholded.gamma_thres, cohorts.truth.gamma_star);
      if (records) {
        rec.gamma_thres = result.thresholded.gamma_thres;
        rec.beta_thres = result.thresholded.beta_thres;
        rec.gamma_star = cohorts.truth.gamma_star;
        rec.beta_star = cohorts.truth.beta_star;
      }
      if (scenario.track_predictive_correlation) {
        // A degenerate per-replication fit leaves the diagnostic absent
        // rather than aborting the batch.
        try {
          rec.predictive_correlation =
              pathway::predictive_correlation(cohorts.target, cohorts.external, config);
        } catch (const std::runtime_error&) {
          rec.predictive_correlation = std::nullopt;
        }
      }
      slots[static_cast<std::size_t>(r)] = std::move(rec);
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(r) + " (seed " +
                               std::to_string(rep_seed) + "): " + e.what());
    }
  });

  SimSummary summary;
  summary.n_reps = n_reps;
  summary.all_solver_ok = true;
  std::vector<double> biases;
  biases.reserve(static_cast<std::size_t>(n_reps));
  int rejections = 0;
  double tpr_b = 0, fpr_b = 0, tpr_g = 0, fpr_g = 0, pred = 0;
  int n_tpr_b = 0, n_fpr_b = 0, n_tpr_g = 0, n_fpr_g = 0, n_pred = 0;
  for (const RepRecord& rec : slots) {
    biases.push_back(rec.bias);
    if (rec.reject) ++rejections;
    if (rec.tpr_beta) { tpr_b += *rec.tpr_beta; ++n_tpr_b; }
    if (rec.fpr_beta) { fpr_b += *rec.fpr_beta; ++n_fpr_b; }
    if (rec.tpr_gamma) { tpr_g += *rec.tpr_gamma; ++n_tpr_g; }
    if (rec.fpr_gamma) { fpr_g += *rec.fpr_gamma; ++n_fpr_g; }
    if (rec.predictive_correlation) { pred += *rec.predictive_correlation; ++n_pred; }
    if (!rec.solver_ok) summary.all_solver_ok = false;
    if (rec.degenerate) ++summary.n_degenerate;
  }
  summary.mean_bias = stats::mean(biases);
  summary.median_bias = stats::median(biases);
  summary.rejection_rate = static_cast<double>(rejections) / n_reps;
  if (n_tpr_b) summary.tpr_beta = tpr_b / n_tpr_b;
  if (n_fpr_b) summary.fpr_beta = fpr_b / n_fpr_b;
  if (n_tpr_g) summary.tpr_gamma = tpr_g / n_tpr_g;
  if (n_fpr_g) summary.fpr_gamma = fpr_g / n_fpr_g;
  if (n_pred) summary.mean_predictive_correlation = pred / n_pred;

  if (records) *records = std::move(slots);
  return summary;
}

}  // namespace mmdpath::sim
