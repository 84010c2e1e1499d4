#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace mmdpath::core {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative-abundance matrix (samples x taxa) with row/column labels.
/// Entries are nonnegative; labels are unique.
struct AbundanceTable {
  Matrix values;
  std::vector<std::string> taxa_ids;
  std::vector<std::string> sample_ids;

  int n_samples() const { return static_cast<int>(values.rows()); }
  int n_taxa() const { return static_cast<int>(values.cols()); }

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// Covariate matrix fed to the regression stages. Rows produced by the CLR
/// transform sum to zero; `centered` records whether that holds.
struct DesignMatrix {
  Matrix values;
  std::vector<std::string> taxa_ids;
  bool centered = false;

  int n_samples() const { return static_cast<int>(values.rows()); }
  int n_taxa() const { return static_cast<int>(values.cols()); }

  void validate() const;
};

/// The cohort carrying the outcome. The metabolite is optional: the
/// integrative pipeline exists precisely for the case where it is missing.
struct TargetDataset {
  DesignMatrix design;
  Vector outcome;
  std::optional<Vector> metabolite;

  void validate() const;
};

/// The auxiliary cohort: design plus the metabolite, no outcome required.
struct ExternalDataset {
  DesignMatrix design;
  Vector metabolite;

  void validate() const;
};

struct AlignmentReport {
  std::vector<std::string> shared_taxa;
  std::vector<std::string> dropped_from_target;
  std::vector<std::string> dropped_from_external;
};

}  // namespace mmdpath::core
