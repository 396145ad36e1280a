#include "imst/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace imst {

namespace {

std::vector<std::size_t> by_uncertainty(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(scores[a]) < std::abs(scores[b]);
  });
  return order;
}

}  // namespace

std::vector<std::size_t> most_uncertain(std::span<const double> scores, std::size_t m) {
  auto order = by_uncertainty(scores);
  order.resize(std::min(m, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

double uncertainty_threshold(std::span<const double> scores, std::size_t m) {
  if (scores.empty()) throw std::invalid_argument("uncertainty threshold of an empty sample set");
  if (m >= scores.size()) {
    double hi = 0.0;
    for (double s : scores) hi = std::max(hi, std::abs(s));
    return hi + 1.0;
  }
  const auto order = by_uncertainty(scores);
  return std::abs(scores[order[m]]);
}

}  // namespace imst
