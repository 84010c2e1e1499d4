// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Criteria 3-8 are Monte Carlo studies at desk scale (p = 100, n = 200,
// N = 300 unless stated); every tolerance is pinned here in code.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mmdpath/commands.hpp"
#include "mmdpath/csv.hpp"
#include "mmdpath/lasso.hpp"
#include "mmdpath/parallel.hpp"
#include "mmdpath/pathway.hpp"
#include "mmdpath/preprocess.hpp"
#include "mmdpath/rng.hpp"
#include "mmdpath/sim.hpp"
#include "mmdpath/stats.hpp"

// The brute-force oracle, OLS helpers and KS distance live with the tests.
#include "helpers.hpp"

using namespace mmdpath;
using testutil::brute_force_objective;
using testutil::direct_objective;
using testutil::ks_distance_normal;
using testutil::ols;
using testutil::ols_residual;
using testutil::random_matrix;
using testutil::random_vector;
using testutil::spearman;

namespace {

int g_parallelism = 2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

sim::Scenario desk_scenario(double theta_star, double rho, sim::Method method) {
  sim::Scenario s;
  s.p = 100;
  s.n = 200;
  s.N = 300;
  s.block_size = 5;
  s.theta_star = theta_star;
  s.rho = rho;
  s.method = method;
  return s;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Solver correctness: brute-force oracle on 200 random problems plus the
//    KKT certificate at 1e-6 on every fit (CV-selected fits are certified
//    inside the library; run_replications exposes that as all_solver_ok,
//    asserted by every Monte Carlo criterion below).
Outcome criterion_solver() {
  rng::SplitMix64 gen(160301);
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const int q = 2 + static_cast<int>(gen.next_below(7));   // <= 8
    const int n = 8 + static_cast<int>(gen.next_below(25));  // <= 32
    lasso::PenalizedProblem p;
    p.design = random_matrix(n, q, gen);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(q);
    for (int j = 0; j < q; ++j) {
      if (gen.next_double() < 0.5) w(j) = 2.0 * gen.next_double() - 1.0;
    }
    p.response = p.design * w + 0.5 * random_vector(n, gen);
    p.penalty_factor = Eigen::VectorXd::Ones(q);
    if (rep % 3 == 0) p.penalty_factor(static_cast<int>(gen.next_below(q))) = 0.0;
    p.lambda = 0.02 + 0.4 * gen.next_double();

    const auto fit = lasso::solve(p);
    if (!fit.converged || fit.kkt_violation > lasso::kKktTol) {
      return {false, "unconverged or uncertified fit at rep " + std::to_string(rep)};
    }
    const double oracle = brute_force_objective(p);
    const double achieved = direct_objective(p, fit.coefficients);
    if (achieved > oracle + 1e-6) {
      return {false, "objective " + fmt(achieved) + " exceeds oracle " + fmt(oracle) +
                         " at rep " + std::to_string(rep)};
    }
    ++checked;
  }
  return {true, "200 problems within 1e-6 of the sign-pattern oracle, KKT <= 1e-6 on all (" +
                    std::to_string(checked) + " checked)"};
}

// ---------------------------------------------------------------------------
// 2. Debiasing oracle: Frisch-Waugh-Lovell equivalence on 50 random
//    low-dimensional instances within 1e-8.
Outcome criterion_fwl() {
  rng::SplitMix64 gen(160302);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 100 + static_cast<int>(gen.next_below(60));
    const int p = 2 + static_cast<int>(gen.next_below(9));  // <= 10
    const Eigen::MatrixXd x = random_matrix(n, p, gen);
    const Eigen::VectorXd m = x * random_vector(p, gen) + random_vector(n, gen);
    const Eigen::VectorXd y =
        0.3 * m + x * random_vector(p, gen) + 0.5 * random_vector(n, gen);

    core::TargetDataset target;
    target.design.values = x;
    for (int j = 0; j < p; ++j) target.design.taxa_ids.push_back("t" + std::to_string(j));
    target.outcome = y;

    pathway::SecondStageFit fit;
    fit.theta_hat = 2.0 * gen.next_double() - 1.0;
    fit.beta_hat = random_vector(p, gen);
    fit.m_hat = m;

    const Eigen::VectorXd z = ols_residual(m, x);
    const double theta_tilde = pathway::debias_theta(fit, z, target);

    Eigen::MatrixXd joint(n, p + 1);
    joint.col(0) = m;
    joint.rightCols(p) = x;
    const double reference = ols(joint, y)(0);
    worst = std::max(worst, std::abs(theta_tilde - reference));
  }
  if (worst >= 1e-8) return {false, "worst |theta_tilde - OLS| = " + fmt(worst)};
  return {true, "50 instances, worst |theta_tilde - OLS| = " + fmt(worst)};
}

// ---------------------------------------------------------------------------
// 3. Null calibration: type-I within [0.02, 0.12] at rho in {0, 0.25} over
//    200 replications each; KS of the pooled null statistic (250 + 250) vs
//    N(0,1) below the 1% critical value.
Outcome criterion_null_calibration() {
  std::string detail;
  for (double rho : {0.0, 0.25}) {
    const auto summary = sim::run_replications(desk_scenario(0.0, rho, sim::Method::integrative),
                                               200, 31337, g_parallelism);
    if (!summary.all_solver_ok) return {false, "solver certificate failed at rho " + fmt(rho)};
    detail += "typeI(rho=" + fmt(rho) + ")=" + fmt(summary.rejection_rate) + " ";
    if (summary.rejection_rate < 0.02 || summary.rejection_rate > 0.12) {
      return {false, detail + "outside [0.02, 0.12]"};
    }
  }

  std::vector<double> pooled;
  for (double rho : {0.0, 0.25}) {
    std::vector<sim::RepRecord> records;
    sim::run_replications(desk_scenario(0.0, rho, sim::Method::integrative), 250, 90210,
                          g_parallelism, &records);
    for (const auto& r : records) pooled.push_back(r.statistic);
  }
  const double d = ks_distance_normal(pooled);
  const double critical = 1.62762 / std::sqrt(static_cast<double>(pooled.size()));
  detail += "KS=" + fmt(d) + " (crit " + fmt(critical) + ", n=500)";
  if (d >= critical) return {false, detail + ": null statistic rejected against N(0,1)"};
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 4. Confounding contrast at rho = 0.25, theta* = 0 on identical seeds:
//    target-only rejects more than the integrative method, above 0.15, while
//    the integrative stays at or below 0.12.
Outcome criterion_confounding_contrast() {
  const std::uint64_t seed = 777001;
  const auto integrative = sim::run_replications(
      desk_scenario(0.0, 0.25, sim::Method::integrative), 200, seed, g_parallelism);
  const auto target_only = sim::run_replications(
      desk_scenario(0.0, 0.25, sim::Method::target_only), 200, seed, g_parallelism);
  if (!integrative.all_solver_ok || !target_only.all_solver_ok) {
    return {false, "solver certificate failed"};
  }
  const std::string detail = "integrative=" + fmt(integrative.rejection_rate) +
                             " target_only=" + fmt(target_only.rejection_rate);
  const bool pass = target_only.rejection_rate > integrative.rejection_rate &&
                    target_only.rejection_rate > 0.15 && integrative.rejection_rate <= 0.12;
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 5. Bias at theta* = 0.2, rho = 0.25: integrative |median bias| <= 0.05 and
//    below target-only's; target-only |median bias| grows over n in
//    {50, 100, 200} allowing one inversion of 0.01.
Outcome criterion_bias() {
  std::vector<double> target_only_bias;
  std::string detail;
  double integrative_200 = 0.0, target_200 = 0.0;
  for (int n : {50, 100, 200}) {
    auto scenario = desk_scenario(0.2, 0.25, sim::Method::integrative);
    scenario.n = n;
    const auto si = sim::run_replications(scenario, 100, 555007, g_parallelism);
    scenario.method = sim::Method::target_only;
    const auto st = sim::run_replications(scenario, 100, 555007, g_parallelism);
    if (!si.all_solver_ok || !st.all_solver_ok) return {false, "solver certificate failed"};
    target_only_bias.push_back(std::abs(st.median_bias));
    if (n == 200) {
      integrative_200 = std::abs(si.median_bias);
      target_200 = std::abs(st.median_bias);
    }
    detail += "n" + std::to_string(n) + ": int=" + fmt(si.median_bias) +
              " tgt=" + fmt(st.median_bias) + "  ";
  }
  if (integrative_200 > 0.05) return {false, detail + "|integrative median bias| > 0.05"};
  if (integrative_200 >= target_200) return {false, detail + "integrative not below target-only"};
  int inversions = 0;
  for (std::size_t i = 1; i < target_only_bias.size(); ++i) {
    if (target_only_bias[i] <= target_only_bias[i - 1]) {
      if (target_only_bias[i - 1] - target_only_bias[i] > 0.01) {
        return {false, detail + "target-only bias inversion exceeds 0.01"};
      }
      ++inversions;
    }
  }
  if (inversions > 1) return {false, detail + "more than one target-only bias inversion"};
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 6. Power monotonicity over the theta* grid at rho = 0.25 with at most one
//    inversion of 0.03; power at theta* = 0.2 at least 0.5.
Outcome criterion_power() {
  const std::vector<double> grid = {0.0, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2};
  std::vector<double> power;
  std::string detail = "power:";
  for (double theta : grid) {
    const auto summary = sim::run_replications(
        desk_scenario(theta, 0.25, sim::Method::integrative), 100, 424242, g_parallelism);
    if (!summary.all_solver_ok) return {false, "solver certificate failed"};
    power.push_back(summary.rejection_rate);
    detail += " " + fmt(summary.rejection_rate);
  }
  int inversions = 0;
  for (std::size_t i = 1; i < power.size(); ++i) {
    if (power[i] < power[i - 1]) {
      if (power[i - 1] - power[i] > 0.03) return {false, detail + " (inversion > 0.03)"};
      ++inversions;
    }
  }
  if (inversions > 1) return {false, detail + " (more than one inversion)"};
  if (power.back() < 0.5) return {false, detail + " (power at 0.2 below 0.5)"};
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 7. Selection consistency in the strong-signal regime (10 nonzeros of 0.5
//    magnitude each, p = 100, n = N = 300, thresholds 0.1): exact sign
//    recovery of gamma* and beta* in at least 90/100 replications; mean TPR
//    >= 0.95 and mean FPR <= 0.05 for both vectors. The selection study runs
//    under the one-SE CV rule: minimum-CV lambda optimizes prediction, not
//    support recovery, and thresholding its occasional above-0.1 spurious
//    coefficients caps exact recovery near 40% here; the one-SE variant is
//    the documented selection-oriented choice. The minimum-CV figure is
//    reported alongside.
Outcome criterion_selection() {
  auto scenario = desk_scenario(0.2, 0.25, sim::Method::integrative);
  scenario.n = 300;
  scenario.layout = sim::SignalLayout::strong_beta;

  auto count_exact = [&](const std::vector<sim::RepRecord>& records) {
    auto sign = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    int exact = 0;
    for (const auto& rec : records) {
      bool ok = true;
      for (int j = 0; j < scenario.p && ok; ++j) {
        if (sign(rec.gamma_thres(j)) != sign(rec.gamma_star(j))) ok = false;
        if (sign(rec.beta_thres(j)) != sign(rec.beta_star(j))) ok = false;
      }
      if (ok) ++exact;
    }
    return exact;
  };

  std::vector<sim::RepRecord> cv_min_records;
  const auto cv_min = sim::run_replications(scenario, 100, 160307, g_parallelism, &cv_min_records);
  const int exact_cv_min = count_exact(cv_min_records);

  scenario.pathway.one_se_rule = true;
  std::vector<sim::RepRecord> records;
  const auto summary = sim::run_replications(scenario, 100, 160307, g_parallelism, &records);
  if (!summary.all_solver_ok || !cv_min.all_solver_ok) {
    return {false, "solver certificate failed"};
  }
  const int exact = count_exact(records);

  const std::string detail = "exact sign recovery " + std::to_string(exact) +
                             "/100 (one-SE; " + std::to_string(exact_cv_min) +
                             "/100 under min-CV), TPR(beta)=" + fmt(*summary.tpr_beta) +
                             " FPR(beta)=" + fmt(*summary.fpr_beta) +
                             " TPR(gamma)=" + fmt(*summary.tpr_gamma) +
                             " FPR(gamma)=" + fmt(*summary.fpr_gamma);
  const bool pass = exact >= 90 && *summary.tpr_beta >= 0.95 && *summary.fpr_beta <= 0.05 &&
                    *summary.tpr_gamma >= 0.95 && *summary.fpr_gamma <= 0.05;
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 8. Partial informativeness over tau in {0.25..4} for scale and position
//    change: null rejection non-decreasing in tau (one inversion of 0.05
//    allowed) and within [0.02, 0.12] for tau <= 1; power at theta* = 0.3
//    non-increasing (same allowance); mean predictive correlation
//    non-increasing (Spearman < 0) with its drop concentrated beyond tau = 1.
Outcome criterion_partial_informativeness() {
  const std::vector<double> taus = {0.25, 0.5, 0.75, 1.0, 1.25, 2.0, 4.0};
  std::string detail;
  for (auto kind : {sim::PerturbationKind::scale_change, sim::PerturbationKind::position_change}) {
    const char* kind_name = kind == sim::PerturbationKind::scale_change ? "scale" : "position";
    std::vector<double> null_rate, power, pred_corr;
    for (double tau : taus) {
      auto null_sc = desk_scenario(0.0, 0.0, sim::Method::integrative);
      null_sc.layout = sim::SignalLayout::weak_leading;
      null_sc.perturbation = kind;
      null_sc.tau = tau;
      null_sc.track_predictive_correlation = true;
      const auto sn = sim::run_replications(null_sc, 100, 616001, g_parallelism);
      if (!sn.all_solver_ok) return {false, "solver certificate failed (null)"};
      null_rate.push_back(sn.rejection_rate);
      if (!sn.mean_predictive_correlation) return {false, "predictive correlation missing"};
      pred_corr.push_back(*sn.mean_predictive_correlation);

      auto power_sc = null_sc;
      power_sc.theta_star = 0.3;
      power_sc.track_predictive_correlation = false;
      const auto sp = sim::run_replications(power_sc, 100, 616002, g_parallelism);
      if (!sp.all_solver_ok) return {false, "solver certificate failed (power)"};
      power.push_back(sp.rejection_rate);
    }

    detail += std::string(kind_name) + ": null[";
    for (double v : null_rate) detail += " " + fmt(v);
    detail += " ] power[";
    for (double v : power) detail += " " + fmt(v);
    detail += " ] corr[";
    for (double v : pred_corr) detail += " " + fmt(v);
    detail += " ]  ";

    for (std::size_t i = 0; i < taus.size(); ++i) {
      if (taus[i] <= 1.0 && (null_rate[i] < 0.02 || null_rate[i] > 0.12)) {
        return {false, detail + "null rate outside [0.02, 0.12] at tau <= 1 (" +
                           std::string(kind_name) + ")"};
      }
    }
    auto monotone = [](const std::vector<double>& v, bool increasing, double slack) {
      int inversions = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        const double step = increasing ? v[i] - v[i - 1] : v[i - 1] - v[i];
        if (step < 0) {
          if (-step > slack) return false;
          if (++inversions > 1) return false;
        }
      }
      return true;
    };
    if (!monotone(null_rate, true, 0.05)) {
      return {false, detail + "null rate not non-decreasing in tau (" + kind_name + ")"};
    }
    if (!monotone(power, false, 0.05)) {
      return {false, detail + "power not non-increasing in tau (" + kind_name + ")"};
    }
    std::vector<double> tau_copy(taus.begin(), taus.end());
    if (spearman(tau_copy, pred_corr) >= 0.0) {
      return {false, detail + "predictive correlation not decreasing (" + kind_name + ")"};
    }
    const double early_drop = pred_corr[0] - pred_corr[3];   // tau 0.25 -> 1
    const double late_drop = pred_corr[3] - pred_corr[6];    // tau 1 -> 4
    if (late_drop <= early_drop) {
      return {false, detail + "correlation drop not concentrated beyond tau = 1 (" +
                         std::string(kind_name) + ")"};
    }
  }
  return {true, detail};
}

// ---------------------------------------------------------------------------
// 9. Preprocessing properties: CLR row sums and scale invariance on 1000
//    random zero-free compositions, inclusive filter boundary, standardization
//    moments exact to 1e-12.
Outcome criterion_preprocessing() {
  rng::SplitMix64 gen(160309);
  for (int rep = 0; rep < 1000; ++rep) {
    const int p = 4 + static_cast<int>(gen.next_below(12));
    core::AbundanceTable table;
    table.values.resize(2, p);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < p; ++j) table.values(i, j) = std::exp(gen.next_normal());
    }
    for (int j = 0; j < p; ++j) table.taxa_ids.push_back("t" + std::to_string(j));
    table.sample_ids = {"a", "b"};

    const auto d = core::clr_transform(table, 1e-8);
    if (d.values.rowwise().sum().cwiseAbs().maxCoeff() >= 1e-9) {
      return {false, "CLR row sum above 1e-9 at rep " + std::to_string(rep)};
    }
    core::AbundanceTable scaled = table;
    const double c = std::exp(3.0 * gen.next_double() - 1.0);
    scaled.values *= c;
    const auto ds = core::clr_transform(scaled, 1e-8);
    if ((ds.values - d.values).cwiseAbs().maxCoeff() >= 1e-9) {
      return {false, "CLR scale invariance violated at rep " + std::to_string(rep)};
    }
  }

  core::AbundanceTable boundary;
  boundary.values = core::Matrix::Ones(10, 1);
  boundary.values(0, 0) = 0.0;
  boundary.taxa_ids = {"t"};
  for (int i = 0; i < 10; ++i) boundary.sample_ids.push_back("s" + std::to_string(i));
  if (core::filter_prevalence(boundary, 0.10).n_taxa() != 1) {
    return {false, "filter boundary not inclusive"};
  }

  for (int rep = 0; rep < 100; ++rep) {
    core::Vector v(21);
    for (int i = 0; i < v.size(); ++i) v(i) = gen.next_normal();
    const core::Vector s = core::standardize_metabolite(v, false);
    const double sd = std::sqrt(s.squaredNorm() / (s.size() - 1));
    if (std::abs(s.mean()) >= 1e-12 || std::abs(sd - 1.0) >= 1e-12) {
      return {false, "standardization moments off at rep " + std::to_string(rep)};
    }
  }
  return {true, "CLR sums/scale invariance (1000 draws), inclusive boundary, exact moments"};
}

// ---------------------------------------------------------------------------
// 10. Determinism: CLI command outputs byte-identical across reruns and
//     parallelism levels at fixed seed, and matching the checked-in goldens.
Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const std::string fixtures = MMDPATH_FIXTURE_DIR;
  const std::string tmp = (fs::temp_directory_path() / "mmdpath_acceptance").string();
  fs::create_directories(tmp);
  std::ostringstream err;

  auto read = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };

  commands::RunConfig clr;
  clr.input = fixtures + "/toy_target_abundance.csv";
  clr.out = tmp + "/design.csv";
  clr.max_zero_fraction = 0.3;
  if (commands::run_clr(clr, err) != 0) return {false, "clr failed: " + err.str()};
  if (read(clr.out) != read(fixtures + "/golden/toy_target_design.csv")) {
    return {false, "clr output differs from the golden file"};
  }

  commands::RunConfig analyze;
  analyze.target_design = fixtures + "/golden/toy_target_design.csv";
  analyze.target_outcome = fixtures + "/toy_target_outcome.csv";
  analyze.external_design = fixtures + "/golden/toy_external_design.csv";
  analyze.external_metabolite = fixtures + "/toy_external_metabolite.csv";
  analyze.seed = 42;
  analyze.out = tmp + "/analyze1.json";
  if (commands::run_analyze(analyze, err) != 0) return {false, "analyze failed: " + err.str()};
  analyze.out = tmp + "/analyze2.json";
  if (commands::run_analyze(analyze, err) != 0) return {false, "analyze rerun failed"};
  if (read(tmp + "/analyze1.json") != read(tmp + "/analyze2.json")) {
    return {false, "analyze reruns differ"};
  }
  if (read(tmp + "/analyze1.json") != read(fixtures + "/golden/toy_analyze.json")) {
    return {false, "analyze output differs from the golden file"};
  }

  commands::RunConfig screen;
  screen.target_design = fixtures + "/golden/toy_target_design.csv";
  screen.target_outcome = fixtures + "/toy_target_outcome.csv";
  screen.external_design = fixtures + "/golden/toy_external_design.csv";
  screen.external_metabolites = fixtures + "/toy_external_panel.csv";
  screen.target_metabolites = fixtures + "/toy_target_panel.csv";
  screen.seed = 42;
  for (int par : {1, 2, 8}) {
    screen.parallelism = par;
    screen.out = tmp + "/screen_p" + std::to_string(par) + ".csv";
    if (commands::run_screen(screen, err) != 0) return {false, "screen failed: " + err.str()};
  }
  const std::string p1 = read(tmp + "/screen_p1.csv");
  if (p1 != read(tmp + "/screen_p2.csv") || p1 != read(tmp + "/screen_p8.csv")) {
    return {false, "screen output varies with parallelism"};
  }
  if (p1 != read(fixtures + "/golden/toy_screen.csv")) {
    return {false, "screen output differs from the golden file"};
  }

  // Simulation summaries across parallelism levels.
  const auto scenario = desk_scenario(0.2, 0.25, sim::Method::integrative);
  sim::Scenario tiny = scenario;
  tiny.p = 36;
  tiny.n = 60;
  tiny.N = 70;
  tiny.block_size = 3;
  std::vector<std::string> dumps;
  for (int par : {1, 4, 16}) {
    const auto summary = sim::run_replications(tiny, 6, 2024, par);
    std::ostringstream s;
    s << summary.mean_bias << '|' << summary.median_bias << '|' << summary.rejection_rate;
    dumps.push_back(s.str());
  }
  if (dumps[0] != dumps[1] || dumps[0] != dumps[2]) {
    return {false, "simulation summary varies with parallelism"};
  }
  return {true, "clr/analyze/screen goldens and parallelism-independent summaries"};
}

}  // namespace

int main(int argc, char** argv) {
  g_parallelism = commands::resolve_parallelism(0);
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 solver-oracle", criterion_solver},
      {"2 debias-fwl", criterion_fwl},
      {"3 null-calibration", criterion_null_calibration},
      {"4 confounding-contrast", criterion_confounding_contrast},
      {"5 bias", criterion_bias},
      {"6 power-monotonicity", criterion_power},
      {"7 selection-consistency", criterion_selection},
      {"8 partial-informativeness", criterion_partial_informativeness},
      {"9 preprocessing", criterion_preprocessing},
      {"10 determinism", criterion_determinism},
  };

  int failures = 0;
  for (auto& [name, fn] : criteria) {
    if (argc > 1 && std::string(argv[1]) != name.substr(0, name.find(' '))) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                              start)
            .count() /
        1000.0;
    std::printf("%s criterion %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", name.c_str(),
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
