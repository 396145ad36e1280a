#include <cmath>
#include <limits>

#include "doctest.h"
#include "imst/critic.hpp"
#include "scenes.hpp"
#include "test_util.hpp"

using namespace imst;

namespace {

CriticParams small_params() {
  CriticParams p;
  p.candidates = 24;
  p.max_rejects = 6;
  p.model.kernel.gamma = 5.0;
  return p;
}

struct Scene {
  Frame frame = test::two_texture_frame(160, 120, 3);
  FrameFeatures ff{frame, FeatureConfig{}};
  BoundingBox box = test::boundary_box(160, 120, 30);
  BudgetedSvm short_model = test::band_classifier(ff, box, 5.0);
};

}  // namespace

TEST_CASE("joint features") {
  const Frame f = test::random_frame(60, 40, 2);
  const FrameFeatures ff(f, FeatureConfig{});
  const BoundingBox p{10, 8, 20, 16};
  const FeatureVector patch = extract(ff, p);
  const FeatureVector j = joint_features(ff, p, Transformation::identity());
  REQUIRE(j.size() == patch.size() + 3);
  CHECK(std::equal(patch.begin(), patch.end(), j.begin()));
  CHECK(j[j.size() - 3] == 0.0);
  CHECK(j[j.size() - 2] == 0.0);
  CHECK(j[j.size() - 1] == 0.0);
  CHECK(joint_features(ff, p, {3, 1, 0.1}) == joint_features(ff, p, {3, 1, 0.1}));

  const FeatureVector half = joint_features(ff, p, {p.w / 2, -p.h / 4, 0.2});
  CHECK(half[half.size() - 3] == doctest::Approx(0.5));
  CHECK(half[half.size() - 2] == doctest::Approx(-0.25));
  CHECK(half[half.size() - 1] == doctest::Approx(0.2));
  const FeatureVector moved = extract(ff, compose(p, {p.w / 2, -p.h / 4, 0.2}));
  CHECK(std::equal(moved.begin(), moved.end(), half.begin()));
}

TEST_CASE("empty critic falls back to the smallest |h| in generation order") {
  Scene s;
  Critic critic(small_params(), 11);
  Critic twin = critic;
  const auto pool = twin.rank_candidates(s.ff, s.box);
  for (std::size_t i = 0; i < pool.size(); ++i) CHECK(pool[i].order == i);

  const Proposal p = critic.propose(s.ff, s.box, s.short_model, 1e-12);
  CHECK(p.fallback);
  CHECK(p.tried == 6);
  std::size_t best = 0;
  double best_abs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < 6; ++i) {
    const double h = std::abs(s.short_model.score(extract(s.ff, compose(s.box, pool[i].y))));
    if (h < best_abs) {
      best_abs = h;
      best = i;
    }
  }
  CHECK(p.y == pool[best].y);
  CHECK(std::abs(p.short_score) == doctest::Approx(best_abs));
}

TEST_CASE("propose returns the best-ranked candidate inside the band") {
  Scene s;
  Critic critic(small_params(), 5);
  // Teach the critic something so the ranking is not generation order.
  GaussianSampler rng(77);
  for (int i = 0; i < 40; ++i) {
    const Transformation y = rng.draw({9, 9, 0.05});
    const FeatureVector patch = extract(s.ff, compose(s.box, y));
    critic.reinforce(joint_from_patch(patch, s.box, y), s.short_model.score(patch), 0.3);
  }
  CHECK_FALSE(critic.model().empty());

  for (double tau : {0.05, 0.3, 0.8, 5.0}) {
    Critic twin = critic;
    const auto pool = twin.rank_candidates(s.ff, s.box);
    for (std::size_t i = 1; i < pool.size(); ++i) CHECK(pool[i - 1].critic_score >= pool[i].critic_score);

    const Proposal p = critic.propose(s.ff, s.box, s.short_model, tau);
    const std::size_t limit = std::min<std::size_t>(6, pool.size());
    std::size_t want = limit;
    for (std::size_t i = 0; i < limit; ++i) {
      if (std::abs(s.short_model.score(extract(s.ff, compose(s.box, pool[i].y)))) < tau) {
        want = i;
        break;
      }
    }
    if (want < limit) {
      CHECK_FALSE(p.fallback);
      CHECK(p.y == pool[want].y);
      CHECK(p.tried == want + 1);
      CHECK(std::abs(p.short_score) < tau);
      CHECK(p.critic_score == pool[want].critic_score);
    } else {
      CHECK(p.fallback);
    }
    if (tau == 5.0) CHECK(p.y == pool[0].y);
  }
}

TEST_CASE("proposals are reproducible") {
  Scene s;
  Critic a(small_params(), 9), b(small_params(), 9);
  for (int i = 0; i < 5; ++i) {
    const Proposal pa = a.propose(s.ff, s.box, s.short_model, 0.2);
    const Proposal pb = b.propose(s.ff, s.box, s.short_model, 0.2);
    CHECK(pa.y == pb.y);
    CHECK(pa.short_score == pb.short_score);
    a.reinforce(pa.joint, pa.short_score, 0.2);
    b.reinforce(pb.joint, pb.short_score, 0.2);
  }
  CHECK(a.model() == b.model());
}

TEST_CASE("reinforcement labels") {
  Critic c(small_params(), 1);
  const std::vector<double> j{0.1, 0.2, 0.3};
  CHECK(c.reinforce(j, 0.01, 0.1) == 1);
  CHECK(c.reinforce(j, -0.01, 0.1) == 1);
  CHECK(c.reinforce(j, 0.9, 0.1) == -1);
  CHECK(c.reinforce(j, -0.1, 0.1) == -1);
}

TEST_CASE("critic budget holds") {
  CriticParams p = small_params();
  p.model.budget = 8;
  Critic c(p, 1);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    c.reinforce(test::random_unit_vector(5, rng), (i % 3) * 0.1, 0.15);
    CHECK(c.model().size() <= 8);
  }
}

TEST_CASE("propose errors") {
  Scene s;
  Critic c(small_params(), 1);
  CHECK_THROWS_AS(c.propose(s.ff, s.box, s.short_model, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(c.propose(s.ff, {5000, 5000, 10, 10}, s.short_model, 0.5), DegenerateSample);
  CriticParams bad = small_params();
  bad.candidates = 0;
  CHECK_THROWS_AS(Critic(bad, 1), std::invalid_argument);
}
