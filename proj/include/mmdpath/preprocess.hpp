#pragma once

#include <tuple>

#include "mmdpath/types.hpp"

namespace mmdpath::core {

enum class PseudocountPolicy {
  zeros_only,   // add the pseudocount only where the entry is exactly zero
  all_entries,  // add it to every entry
};

/// Keeps the columns whose fraction of zero entries is <= max_zero_fraction
/// (boundary inclusive), preserving column order.
/// Throws if the table is empty or no column survives.
AbundanceTable filter_prevalence(const AbundanceTable& table, double max_zero_fraction);

/// Centered log-ratio transform: per row, log the (pseudocount-adjusted)
/// entries and subtract the row mean of the logs. Output rows sum to zero.
DesignMatrix clr_transform(const AbundanceTable& table, double pseudocount,
                           PseudocountPolicy policy = PseudocountPolicy::zeros_only);

/// Restricts both cohorts to their shared taxa, in the target's original
/// column order. Throws if the intersection is empty.
std::tuple<TargetDataset, ExternalDataset, AlignmentReport> align_cohorts(
    const TargetDataset& target, const ExternalDataset& external);

/// Optionally logs, then centers and scales to unit sample standard deviation
/// (n-1 denominator). With log_first, all inputs must be positive.
/// Throws on zero variance.
Vector standardize_metabolite(const Vector& values, bool log_first = true);

}  // namespace mmdpath::core
