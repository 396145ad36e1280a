#pragma once

#include <optional>
#include <vector>

#include "imst/critic.hpp"
#include "imst/features.hpp"
#include "imst/sampler.hpp"
#include "imst/svm.hpp"

namespace imst {

enum class SampleSource { kGaussian, kCritic };

const char* to_string(SampleSource source);

struct DrawnSample {
  Transformation y;
  SampleSource source = SampleSource::kGaussian;
  FeatureVector patch;       // empty when degenerate
  double short_score = 0.0;  // h(x; theta_short)
  bool degenerate = false;
};

struct HybridStats {
  double tau = 0.0;              // threshold the critic worked against
  std::size_t proposals = 0;     // critic slots attempted
  std::size_t accepted = 0;      // proposals that passed |h| < tau
  std::size_t fallbacks = 0;     // proposals returned via the smallest-|h| fallback
  std::size_t refilled = 0;      // critic slots refilled with a Gaussian draw
  std::size_t reinforcements = 0;

  double accept_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

struct HybridOptions {
  /// Threshold for the critic half. When unset it is derived from the
  /// Gaussian half as uncertainty_threshold(|h|, queries).
  std::optional<double> tau;
  std::size_t queries = 10;
  double inflation = 1.0;
  /// Train the critic after each scored sample.
  bool reinforce = true;
};

struct HybridBatch {
  std::vector<DrawnSample> samples;  // n/2 Gaussian block first, then the critic block
  HybridStats stats;
};

/// Gaussian draws around p_prev, scored by the short-term model. Degenerate
/// patches are kept in place and flagged.
std::vector<DrawnSample> gaussian_samples(GaussianSampler& rng, const SearchSigma& sigma,
                                          std::size_t count, const FrameFeatures& image,
                                          const BoundingBox& p_prev, const BudgetedSvm& short_model);

/// n transformations: n/2 Gaussian, then n/2 critic proposals. The critic is
/// reinforced on every scored Gaussian sample before proposing, and on each
/// proposal as it is accepted. A critic slot that fails is refilled by a
/// Gaussian draw tagged gaussian.
HybridBatch hybrid_batch(const SamplerConfig& cfg, GaussianSampler& rng, Critic& critic,
                         const FrameFeatures& image, const BoundingBox& p_prev,
                         const BudgetedSvm& short_model, const HybridOptions& options = {});

}  // namespace imst
