#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mmdpath::lasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Objective solved throughout:
//   (1/(2n)) * ||y - A w||^2 + lambda * sum_j pf_j * |w_j|
// pf_j = 0 leaves coordinate j unpenalized (used for the metabolite effect).

constexpr double kKktTol = 1e-6;

struct PenalizedProblem {
  Vector response;        // y, length n
  Matrix design;          // A, n x q
  Vector penalty_factor;  // pf, length q, entries >= 0
  double lambda = 0.0;

  int n() const { return static_cast<int>(design.rows()); }
  int q() const { return static_cast<int>(design.cols()); }
};

struct LassoFit {
  Vector coefficients;
  double lambda = 0.0;
  double objective_value = 0.0;
  int n_iterations = 0;  // completed coordinate-descent sweeps
  bool converged = false;
  double kkt_violation = 0.0;
  std::vector<double> objective_trace;  // objective after each sweep
};

struct CvResult {
  Vector lambda_grid;     // descending
  Vector mean_cv_error;   // held-out MSE averaged over folds
  Vector se_cv_error;     // sd over folds / sqrt(k)
  double lambda_min = 0.0;
  double lambda_chosen = 0.0;
  std::vector<int> fold_assignment;  // length n, values in [0, k)
};

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double objective(const PenalizedProblem& problem, const Vector& w);

/// Max KKT stationarity violation of w for the problem. Independent of the
/// coordinate-descent path: recomputes everything from the raw design.
/// Implemented in kkt.cpp.
double kkt_violation(const Matrix& design, const Vector& response, const Vector& penalty_factor,
                     double lambda, const Vector& w);
double kkt_violation(const PenalizedProblem& problem, const Vector& w);

/// Cyclic coordinate descent with covariance updates. Convergence requires
/// both a small max coefficient change per sweep and a passing KKT check;
/// fits that exhaust max_iter come back with converged = false.
/// Throws if the unpenalized block is rank deficient.
LassoFit solve(const PenalizedProblem& problem, double tol = 1e-7, int max_iter = 100000);

/// Solves at every grid value (descending), warm-starting each fit from the
/// previous one.
std::vector<LassoFit> solve_path(const PenalizedProblem& base, const Vector& lambda_grid,
                                 double tol = 1e-7, int max_iter = 100000);

/// Geometric grid from lambda_max = max_j |a_j'y| / (n pf_j) over penalized j
/// down to ratio * lambda_max.
Vector lambda_path(const PenalizedProblem& base, int n_lambdas = 100, double ratio = 0.01);

/// K-fold cross-validation over the lambda_path grid. Folds come from a
/// seeded permutation; fold results are combined in fold order, so the output
/// is deterministic. lambda_chosen is lambda_min unless one_se_rule is set.
CvResult cross_validate(const PenalizedProblem& base, int k, int n_lambdas, double ratio,
                        std::uint64_t rng_seed, bool one_se_rule = false);

/// cross_validate followed by a full-data solve at lambda_chosen.
struct CvFit {
  CvResult cv;
  LassoFit fit;
};
CvFit cv_fit(const PenalizedProblem& base, int k, int n_lambdas, double ratio,
             std::uint64_t rng_seed, bool one_se_rule = false);

}  // namespace mmdpath::lasso
