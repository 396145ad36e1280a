#include "imst/critic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace imst {

void CriticParams::validate() const {
  if (candidates == 0) throw std::invalid_argument("critic.candidates must be at least 1");
  if (max_rejects == 0) throw std::invalid_argument("critic.max_rejects must be at least 1");
  if (sigma_xy_factor < 0.0 || sigma_scale < 0.0) {
    throw std::invalid_argument("critic sigmas must be nonnegative");
  }
  model.validate();
}

FeatureVector joint_from_patch(std::span<const double> patch, const BoundingBox& p_prev,
                               const Transformation& y) {
  FeatureVector joint(patch.begin(), patch.end());
  joint.push_back(y.dx / p_prev.w);
  joint.push_back(y.dy / p_prev.h);
  joint.push_back(y.ds);
  return joint;
}

FeatureVector joint_features(const FrameFeatures& image, const BoundingBox& p_prev,
                             const Transformation& y) {
  return joint_from_patch(extract(image, compose(p_prev, y)), p_prev, y);
}

Critic::Critic(CriticParams params, std::uint64_t seed)
    : params_(params), model_(params.model), rng_(seed) {
  params_.validate();
}

std::vector<Candidate> Critic::rank_candidates(const FrameFeatures& image,
                                               const BoundingBox& p_prev, double inflation) {
  const double s = params_.sigma_xy_factor * std::max(p_prev.w, p_prev.h) * inflation;
  const SearchSigma sigma{s, s, params_.sigma_scale * inflation};
  std::vector<Candidate> pool;
  pool.reserve(params_.candidates);
  for (std::size_t i = 0; i < params_.candidates; ++i) {
    const Transformation y = rng_.draw(sigma);
    try {
      Candidate c{y, joint_features(image, p_prev, y), 0.0, i};
      c.critic_score = model_.score(c.joint);
      pool.push_back(std::move(c));
    } catch (const DegenerateSample&) {
      // off-frame candidate; skipped
    }
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
    return a.critic_score > b.critic_score;
  });
  return pool;
}

Proposal Critic::propose(const FrameFeatures& image, const BoundingBox& p_prev,
                         const BudgetedSvm& short_model, double tau, double inflation) {
  if (!(tau > 0.0)) throw std::invalid_argument("uncertainty threshold must be positive");
  auto pool = rank_candidates(image, p_prev, inflation);
  if (pool.empty()) throw DegenerateSample("every critic candidate was degenerate");

  const std::size_t limit = std::min(params_.max_rejects, pool.size());
  std::size_t best = 0;
  double best_abs = std::numeric_limits<double>::infinity();
  double best_score = 0.0;
  for (std::size_t i = 0; i < limit; ++i) {
    const auto& c = pool[i];
    const std::span<const double> patch(c.joint.data(), c.joint.size() - 3);
    const double h = short_model.score(patch);
    if (std::abs(h) < tau) {
      return {c.y, FeatureVector(patch.begin(), patch.end()), c.joint, h, c.critic_score, false, i + 1};
    }
    if (std::abs(h) < best_abs) {
      best_abs = std::abs(h);
      best = i;
      best_score = h;
    }
  }
  const auto& c = pool[best];
  return {c.y, FeatureVector(c.joint.begin(), c.joint.end() - 3), c.joint, best_score,
          c.critic_score, true, limit};
}

int Critic::reinforce(std::span<const double> joint, double short_score, double tau) {
  const int label = std::abs(short_score) < tau ? 1 : -1;
  model_.update(LabeledExample{FeatureVector(joint.begin(), joint.end()), label});
  return label;
}

int Critic::reinforce(const FrameFeatures& image, const BoundingBox& p_prev, const Transformation& y,
                      double short_score, double tau) {
  return reinforce(joint_features(image, p_prev, y), short_score, tau);
}

}  // namespace imst
