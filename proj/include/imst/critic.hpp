#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imst/features.hpp"
#include "imst/sampler.hpp"
#include "imst/svm.hpp"

namespace imst {

struct CriticParams {
  std::size_t candidates = 64;  // pool drawn per proposal
  std::size_t max_rejects = 10;
  double sigma_xy_factor = 0.3;  // candidate spread, factor * max(w, h)
  double sigma_scale = 0.05;
  SvmParams model{};

  void validate() const;
};

/// Patch features at compose(p_prev, y) followed by (dx / w, dy / h, ds),
/// with w, h taken from p_prev. Length D + 3.
FeatureVector joint_features(const FrameFeatures& image, const BoundingBox& p_prev,
                             const Transformation& y);
FeatureVector joint_from_patch(std::span<const double> patch, const BoundingBox& p_prev,
                               const Transformation& y);

struct Candidate {
  Transformation y;
  FeatureVector joint;
  double critic_score = 0.0;
  std::size_t order = 0;  // generation index within the pool
};

struct Proposal {
  Transformation y;
  FeatureVector patch;       // patch features, reused for classifier scoring
  FeatureVector joint;
  double short_score = 0.0;  // h(x; theta_short)
  double critic_score = 0.0;
  bool fallback = false;     // no candidate passed |h| < tau within max_rejects
  std::size_t tried = 0;     // candidates tested against the short model
};

/// Learns which transformations land in the short-term classifier's
/// uncertain region and proposes new ones there.
class Critic {
 public:
  Critic(CriticParams params, std::uint64_t seed);

  const CriticParams& params() const { return params_; }
  const BudgetedSvm& model() const { return model_; }

  /// Draws a fresh pool of `candidates` Gaussian perturbations, drops
  /// degenerate patches and sorts by critic score, highest first (stable, so
  /// ties keep generation order).
  std::vector<Candidate> rank_candidates(const FrameFeatures& image, const BoundingBox& p_prev,
                                         double inflation = 1.0);

  /// Walks the ranked pool and returns the first candidate with
  /// |h(x; short_model)| < tau. After max_rejects consecutive failures the
  /// candidate with the smallest |h| seen is returned with `fallback` set.
  /// Throws DegenerateSample if every candidate is degenerate and
  /// std::invalid_argument unless tau > 0.
  Proposal propose(const FrameFeatures& image, const BoundingBox& p_prev,
                   const BudgetedSvm& short_model, double tau, double inflation = 1.0);

  /// Labels the sample +1 if |short_score| < tau (it troubled the
  /// classifier), -1 otherwise, and trains the critic model on it.
  /// Returns the label.
  int reinforce(std::span<const double> joint, double short_score, double tau);
  int reinforce(const FrameFeatures& image, const BoundingBox& p_prev, const Transformation& y,
                double short_score, double tau);

 private:
  CriticParams params_;
  BudgetedSvm model_;
  GaussianSampler rng_;
};

}  // namespace imst
