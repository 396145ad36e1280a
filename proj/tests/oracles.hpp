#pragma once

// Straightforward reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace imst::oracle {

/// Unbudgeted passive-aggressive kernel learner written from the update rule.
struct PaLearner {
  double gamma;
  double C;
  double bias = 0.0;
  std::vector<std::vector<double>> xs;
  std::vector<double> coef;

  double kernel(const std::vector<double>& a, const std::vector<double>& b) const {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * d);
  }
  double score(const std::vector<double>& x) const {
    double s = bias;
    for (std::size_t i = 0; i < xs.size(); ++i) s += coef[i] * kernel(xs[i], x);
    return s;
  }
  void learn(const std::vector<double>& x, int y) {
    const double loss = std::max(0.0, 1.0 - y * score(x));
    if (loss == 0.0) return;
    xs.push_back(x);
    coef.push_back(y * std::min(C, loss / kernel(x, x)));
  }
};

/// (m+1)-th smallest |s| by full sort.
inline double threshold_by_sort(std::vector<double> s, std::size_t m) {
  for (auto& v : s) v = std::abs(v);
  std::sort(s.begin(), s.end());
  return m < s.size() ? s[m] : s.back() + 1.0;
}

/// Indices of the m smallest |s| with index tie-break, by sorting (|s|, index) pairs.
inline std::vector<std::size_t> queries_by_sort(const std::vector<double>& s, std::size_t m) {
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < s.size(); ++i) keyed.emplace_back(std::abs(s[i]), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(m, s.size()); ++i) out.push_back(keyed[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace imst::oracle
