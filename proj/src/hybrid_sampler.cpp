#include "imst/hybrid_sampler.hpp"

#include <algorithm>

#include "imst/uncertainty.hpp"

namespace imst {

namespace {

// propose() needs tau > 0; an all-zero score block would otherwise give 0.
constexpr double kMinTau = 1e-12;

}  // namespace

const char* to_string(SampleSource source) {
  return source == SampleSource::kCritic ? "critic" : "gaussian";
}

std::vector<DrawnSample> gaussian_samples(GaussianSampler& rng, const SearchSigma& sigma,
                                          std::size_t count, const FrameFeatures& image,
                                          const BoundingBox& p_prev, const BudgetedSvm& short_model) {
  std::vector<DrawnSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DrawnSample s;
    s.y = rng.draw(sigma);
    try {
      s.patch = extract(image, compose(p_prev, s.y));
      s.short_score = short_model.score(s.patch);
    } catch (const DegenerateSample&) {
      s.degenerate = true;
    }
    out.push_back(std::move(s));
  }
  return out;
}

HybridBatch hybrid_batch(const SamplerConfig& cfg, GaussianSampler& rng, Critic& critic,
                         const FrameFeatures& image, const BoundingBox& p_prev,
                         const BudgetedSvm& short_model, const HybridOptions& options) {
  cfg.validate();
  const std::size_t half = cfg.n / 2;
  const SearchSigma sigma = cfg.sigma_for(p_prev, options.inflation);

  HybridBatch batch;
  batch.samples = gaussian_samples(rng, sigma, half, image, p_prev, short_model);

  double tau = 0.0;
  if (options.tau) {
    tau = *options.tau;
  } else {
    std::vector<double> scores;
    for (const auto& s : batch.samples) {
      if (!s.degenerate) scores.push_back(s.short_score);
    }
    tau = scores.empty() ? kMinTau : uncertainty_threshold(scores, options.queries);
  }
  tau = std::max(tau, kMinTau);
  batch.stats.tau = tau;

  if (options.reinforce) {
    for (const auto& s : batch.samples) {
      if (s.degenerate) continue;
      critic.reinforce(joint_from_patch(s.patch, p_prev, s.y), s.short_score, tau);
      ++batch.stats.reinforcements;
    }
  }

  for (std::size_t i = 0; i < half; ++i) {
    ++batch.stats.proposals;
    try {
      Proposal p = critic.propose(image, p_prev, short_model, tau, options.inflation);
      if (p.fallback) {
        ++batch.stats.fallbacks;
      } else {
        ++batch.stats.accepted;
      }
      if (options.reinforce) {
        critic.reinforce(p.joint, p.short_score, tau);
        ++batch.stats.reinforcements;
      }
      batch.samples.push_back({p.y, SampleSource::kCritic, std::move(p.patch), p.short_score, false});
    } catch (const DegenerateSample&) {
      ++batch.stats.refilled;
      auto refill = gaussian_samples(rng, sigma, 1, image, p_prev, short_model);
      batch.samples.push_back(std::move(refill.front()));
    }
  }
  return batch;
}

}  // namespace imst
