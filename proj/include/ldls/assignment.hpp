#pragma once

#include <vector>

namespace ldls {

/// Maximum-total-weight one-to-one matching between rows and columns of a
/// nonnegative weight matrix (rows may differ in count from columns). Pairs
/// with zero weight are never reported. Among matchings with equal total,
/// the one whose (row, col) pair list is lexicographically smallest wins.
///
/// Returns, for each row, the matched column or -1.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights);

/// Optimal total only (no tie-breaking); exposed for testing.
double max_weight_total(const std::vector<std::vector<double>>& weights);

}  // namespace ldls
