#pragma once

#include <span>
#include <vector>

namespace imst {

/// Indices of the m entries with the smallest |score|, ties broken by index,
/// returned in ascending index order. Saturates at all indices when m >= n.
std::vector<std::size_t> most_uncertain(std::span<const double> scores, std::size_t m);

/// Threshold tau such that exactly the m smallest |score| lie strictly below
/// it: the (m+1)-th smallest |score|, or max|score| + 1 when m >= n.
/// Requires a nonempty input.
double uncertainty_threshold(std::span<const double> scores, std::size_t m);

}  // namespace imst
