#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmdpath/lasso.hpp"
#include "mmdpath/rng.hpp"
#include "mmdpath/stats.hpp"

namespace testutil {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline std::string fixture(const std::string& name) {
  return std::string(MMDPATH_FIXTURE_DIR) + "/" + name;
}

inline MatrixXd random_matrix(int n, int q, mmdpath::rng::SplitMix64& gen) {
  MatrixXd out(n, q);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < q; ++j) out(i, j) = gen.next_normal();
  }
  return out;
}

inline VectorXd random_vector(int n, mmdpath::rng::SplitMix64& gen) {
  VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = gen.next_normal();
  return out;
}

// Direct objective evaluation, written independently of lasso::objective.
inline double direct_objective(const mmdpath::lasso::PenalizedProblem& p, const VectorXd& w) {
  const double n = static_cast<double>(p.design.rows());
  double l1 = 0.0;
  for (int j = 0; j < w.size(); ++j) l1 += p.penalty_factor(j) * std::abs(w(j));
  const VectorXd r = p.response - p.design * w;
  return r.squaredNorm() / (2.0 * n) + p.lambda * l1;
}

// Sign-pattern brute force: enumerates all 3^(#penalized) sign assignments,
// solves the stationarity system of each, and returns the smallest objective
// among the candidates. The true optimum's pattern is enumerated, so this is
// the exact optimal value up to the skipped singular systems.
inline double brute_force_objective(const mmdpath::lasso::PenalizedProblem& p) {
  const int q = p.q();
  const double n = static_cast<double>(p.n());
  const MatrixXd gram = p.design.transpose() * p.design / n;
  const VectorXd xty = p.design.transpose() * p.response / n;

  std::vector<int> penalized;
  for (int j = 0; j < q; ++j) {
    if (p.penalty_factor(j) > 0.0) penalized.push_back(j);
  }
  const int m = static_cast<int>(penalized.size());

  double best = direct_objective(p, VectorXd::Zero(q));
  long patterns = 1;
  for (int i = 0; i < m; ++i) patterns *= 3;

  for (long code = 0; code < patterns; ++code) {
    std::vector<int> active;
    std::vector<double> sign;
    for (int j = 0; j < q; ++j) {
      if (p.penalty_factor(j) == 0.0) {
        active.push_back(j);
        sign.push_back(0.0);
      }
    }
    long c = code;
    for (int i = 0; i < m; ++i) {
      const int s = static_cast<int>(c % 3);
      c /= 3;
      if (s != 0) {
        active.push_back(penalized[static_cast<std::size_t>(i)]);
        sign.push_back(s == 1 ? 1.0 : -1.0);
      }
    }
    if (active.empty()) continue;

    const int a = static_cast<int>(active.size());
    MatrixXd G(a, a);
    VectorXd rhs(a);
    for (int r = 0; r < a; ++r) {
      for (int s2 = 0; s2 < a; ++s2) G(r, s2) = gram(active[static_cast<std::size_t>(r)], active[static_cast<std::size_t>(s2)]);
      const int j = active[static_cast<std::size_t>(r)];
      rhs(r) = xty(j) - p.lambda * p.penalty_factor(j) * sign[static_cast<std::size_t>(r)];
    }
    Eigen::FullPivLU<MatrixXd> lu(G);
    if (!lu.isInvertible()) continue;
    const VectorXd wa = lu.solve(rhs);
    VectorXd w = VectorXd::Zero(q);
    for (int r = 0; r < a; ++r) w(active[static_cast<std::size_t>(r)]) = wa(r);
    best = std::min(best, direct_objective(p, w));
  }
  return best;
}

// Least squares through a rank-revealing QR; used as the independent oracle
// for the unpenalized and debiasing checks.
inline VectorXd ols(const MatrixXd& design, const VectorXd& response) {
  return design.colPivHouseholderQr().solve(response);
}

inline VectorXd ols_residual(const VectorXd& v, const MatrixXd& design) {
  return v - design * ols(design, v);
}

// Kolmogorov-Smirnov distance of a sample against the standard normal.
inline double ks_distance_normal(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = mmdpath::stats::normal_cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[order[i]] = static_cast<double>(i);
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  Eigen::Map<const VectorXd> vx(rx.data(), static_cast<int>(rx.size()));
  Eigen::Map<const VectorXd> vy(ry.data(), static_cast<int>(ry.size()));
  return mmdpath::stats::pearson_correlation(vx, vy);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace testutil
