#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "imst/features.hpp"

namespace imst {

enum class KernelType { kLinear, kGaussian };

struct Kernel {
  KernelType type = KernelType::kGaussian;
  double gamma = 2.0;

  /// Linear: a.b. Gaussian: exp(-gamma * |a - b|^2), so K(x, x) == 1 exactly.
  double operator()(std::span<const double> a, std::span<const double> b) const;
};

inline constexpr std::size_t kUnboundedBudget = std::numeric_limits<std::size_t>::max();

struct SvmParams {
  Kernel kernel{};
  std::size_t budget = 100;
  double C = 10.0;
  double bias = 0.0;

  void validate() const;
};

struct LabeledExample {
  FeatureVector features;
  int label = 1;  // -1 or +1
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SupportVectorView {
  std::span<const double> x;
  int label;
  double beta;
  std::uint64_t serial;  // insertion order, used for eviction ties
};

/// Online kernel SVM trained by passive-aggressive steps under a hard
/// support-vector budget.
///
/// An example (x, y) with margin y*score(x) >= 1 leaves the model untouched.
/// Otherwise x joins the support set with
///   beta = y * min(C, (1 - y*score(x)) / K(x, x)),
/// after which support vectors are evicted until the budget holds again.
/// Eviction removes the vector with the smallest beta^2 * K(sv, sv); ties go
/// to the oldest insertion. The bias is a fixed offset and is never learned.
class BudgetedSvm {
 public:
  explicit BudgetedSvm(SvmParams params = {});

  const SvmParams& params() const { return params_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  /// Feature length fixed by the first support vector; 0 while empty.
  std::size_t dimension() const { return dim_; }
  SupportVectorView support_vector(std::size_t i) const;

  /// sum_i beta_i K(sv_i, x) + bias. Empty model scores exactly 0.
  double score(std::span<const double> x) const;
  /// sign(score - tau) with an exact tie mapped to -1.
  int classify(std::span<const double> x, double tau) const;

  /// One passive-aggressive step. Returns true if a support vector was added.
  bool update(const LabeledExample& example);
  /// Sequential steps over the batch; returns the number of vectors added.
  std::size_t update(std::span<const LabeledExample> batch);

  /// Inserts a support vector directly, then restores the budget.
  /// Throws if |beta| > C or sign(beta) disagrees with the label.
  void add_support_vector(std::span<const double> x, int label, double beta);

  /// Removes the support vector with the smallest beta^2 K(sv, sv).
  void evict();

  /// Versioned ASCII snapshot; floating values are written as hex floats so
  /// a round trip is exact.
  std::string serialize() const;
  static BudgetedSvm deserialize(std::string_view text);

  friend bool operator==(const BudgetedSvm& a, const BudgetedSvm& b);

 private:
  void check_dimension(std::span<const double> x) const;
  void push(std::span<const double> x, int label, double beta, std::uint64_t serial);
  void enforce_budget();
  void erase(std::size_t index);

  SvmParams params_;
  std::size_t dim_ = 0;
  std::vector<double> vectors_;  // size() rows of dim_ values
  std::vector<int> labels_;
  std::vector<double> betas_;
  std::vector<double> self_kernel_;
  std::vector<std::uint64_t> serials_;
  std::uint64_t next_serial_ = 0;
};

/// Sign convention shared by the tracker: exact zero is background.
inline int sign_label(double v) { return v > 0.0 ? 1 : -1; }

}  // namespace imst
