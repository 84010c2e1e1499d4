#include "mmdpath/lasso.hpp"

#include <cmath>

namespace mmdpath::lasso {

// Deliberately shares nothing with the coordinate-descent loop: the residual
// correlations are recomputed from the raw design so this certifies the fit
// rather than the solver's bookkeeping.
double kkt_violation(const Matrix& design, const Vector& response, const Vector& penalty_factor,
                     double lambda, const Vector& w) {
  const double n = static_cast<double>(design.rows());
  const Vector corr = design.transpose() * (response - design * w) / n;

  double worst = 0.0;
  for (int j = 0; j < corr.size(); ++j) {
    const double pf = penalty_factor(j);
    const double c = corr(j);
    double v;
    if (pf > 0.0) {
      if (w(j) != 0.0) {
        const double sign = w(j) > 0.0 ? 1.0 : -1.0;
        v = std::abs(c - lambda * pf * sign);
      } else {
        v = std::max(0.0, std::abs(c) - lambda * pf);
      }
    } else {
      v = std::abs(c);
    }
    if (v > worst) worst = v;
  }
  return worst;
}

double kkt_violation(const PenalizedProblem& problem, const Vector& w) {
  return kkt_violation(problem.design, problem.response, problem.penalty_factor, problem.lambda, w);
}

}  // namespace mmdpath::lasso
