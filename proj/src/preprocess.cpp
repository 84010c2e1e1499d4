#include "mmdpath/preprocess.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mmdpath::core {

AbundanceTable filter_prevalence(const AbundanceTable& table, double max_zero_fraction) {
  table.validate();
  if (table.n_samples() == 0 || table.n_taxa() == 0) {
    throw std::invalid_argument("filter_prevalence: empty table");
  }
  if (max_zero_fraction < 0.0 || max_zero_fraction > 1.0) {
    throw std::invalid_argument("filter_prevalence: max_zero_fraction must be in [0,1]");
  }

  const int n = table.n_samples();
  std::vector<int> keep;
  for (int j = 0; j < table.n_taxa(); ++j) {
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
      if (table.values(i, j) == 0.0) ++zeros;
    }
    if (static_cast<double>(zeros) / n <= max_zero_fraction) keep.push_back(j);
  }
  if (keep.empty()) {
    throw std::runtime_error("filter_prevalence: no taxa survive filter");
  }

  AbundanceTable out;
  out.sample_ids = table.sample_ids;
  out.values.resize(n, static_cast<int>(keep.size()));
  out.taxa_ids.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.values.col(static_cast<int>(k)) = table.values.col(keep[k]);
    out.taxa_ids.push_back(table.taxa_ids[static_cast<std::size_t>(keep[k])]);
  }
  return out;
}

DesignMatrix clr_transform(const AbundanceTable& table, double pseudocount,
                           PseudocountPolicy policy) {
  table.validate();
  if (!(pseudocount > 0.0)) {
    throw std::invalid_argument("clr_transform: pseudocount must be positive");
  }
  const int n = table.n_samples();
  const int p = table.n_taxa();

  DesignMatrix out;
  out.taxa_ids = table.taxa_ids;
  out.centered = true;
  out.values.resize(n, p);
  for (int i = 0; i < n; ++i) {
    double log_sum = 0.0;
    for (int j = 0; j < p; ++j) {
      double a = table.values(i, j);
      if (policy == PseudocountPolicy::all_entries) {
        a += pseudocount;
      } else if (a == 0.0) {
        a = pseudocount;
      }
      const double la = std::log(a);
      out.values(i, j) = la;
      log_sum += la;
    }
    const double mean = log_sum / p;
    for (int j = 0; j < p; ++j) out.values(i, j) -= mean;
  }
  out.validate();
  return out;
}

std::tuple<TargetDataset, ExternalDataset, AlignmentReport> align_cohorts(
    const TargetDataset& target, const ExternalDataset& external) {
  target.validate();
  external.validate();

  std::unordered_map<std::string, int> external_col;
  for (int j = 0; j < external.design.n_taxa(); ++j) {
    external_col[external.design.taxa_ids[static_cast<std::size_t>(j)]] = j;
  }

  AlignmentReport report;
  std::vector<int> target_keep, external_keep;
  std::unordered_set<std::string> shared;
  for (int j = 0; j < target.design.n_taxa(); ++j) {
    const auto& name = target.design.taxa_ids[static_cast<std::size_t>(j)];
    auto it = external_col.find(name);
    if (it != external_col.end()) {
      report.shared_taxa.push_back(name);
      shared.insert(name);
      target_keep.push_back(j);
      external_keep.push_back(it->second);
    } else {
      report.dropped_from_target.push_back(name);
    }
  }
  for (const auto& name : external.design.taxa_ids) {
    if (!shared.count(name)) report.dropped_from_external.push_back(name);
  }
  if (report.shared_taxa.empty()) {
    throw std::runtime_error("align_cohorts: cohorts share no taxa");
  }

  auto subset = [](const DesignMatrix& d, const std::vector<int>& cols,
                   const std::vector<std::string>& names) {
    DesignMatrix out;
    out.centered = false;  // row sums generally change when columns drop
    out.taxa_ids = names;
    out.values.resize(d.values.rows(), static_cast<int>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.values.col(static_cast<int>(k)) = d.values.col(cols[k]);
    }
    return out;
  };

  TargetDataset t_out;
  t_out.design = subset(target.design, target_keep, report.shared_taxa);
  t_out.outcome = target.outcome;
  t_out.metabolite = target.metabolite;

  ExternalDataset e_out;
  e_out.design = subset(external.design, external_keep, report.shared_taxa);
  e_out.metabolite = external.metabolite;

  return {std::move(t_out), std::move(e_out), std::move(report)};
}

Vector standardize_metabolite(const Vector& values, bool log_first) {
  const auto n = values.size();
  if (n < 2) {
    throw std::invalid_argument("standardize_metabolite: need at least 2 values");
  }
  Vector v = values;
  if (log_first) {
    if ((v.array() <= 0.0).any()) {
      throw std::invalid_argument(
          "standardize_metabolite: log transform requires positive values");
    }
    v = v.array().log();
  }
  const double mean = v.mean();
  v.array() -= mean;
  const double sd = std::sqrt(v.squaredNorm() / static_cast<double>(n - 1));
  if (sd == 0.0) {
    throw std::runtime_error("standardize_metabolite: zero variance metabolite");
  }
  return v / sd;
}

}  // namespace mmdpath::core
