#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "imst/sampler.hpp"
#include "imst/synth.hpp"
#include "test_util.hpp"

using namespace imst;

namespace {

Scenario make(ScenarioKind kind, std::size_t frames, std::uint64_t seed = 1) {
  Scenario s;
  s.kind = kind;
  s.frame_count = frames;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("scenario names") {
  for (ScenarioKind k : kAllScenarioKinds) CHECK(parse_scenario_kind(to_string(k)) == k);
  CHECK(to_string(ScenarioKind::kFastMotion) == "fast_motion");
  CHECK_THROWS_AS(parse_scenario_kind("wobble"), std::invalid_argument);
}

TEST_CASE("scenario validation") {
  Scenario s;
  s.target_w = 400;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.frame_count = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = {};
  s.noise = -1;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("linear motion follows a straight line between bounces") {
  const auto seq = render(make(ScenarioKind::kLinear, 80));
  REQUIRE(seq.frames.size() == 80);
  REQUIRE(seq.ground_truth.size() == 80);
  // Each step moves by exactly `speed`; the direction only flips at walls.
  int straight = 0;
  for (std::size_t t = 1; t + 1 < seq.ground_truth.size(); ++t) {
    const auto& a = seq.ground_truth[t - 1];
    const auto& b = seq.ground_truth[t];
    const auto& c = seq.ground_truth[t + 1];
    CHECK(center_distance(a, b) == doctest::Approx(1.5).epsilon(1e-9));
    const double cross = (b.center_x() - a.center_x()) * (c.center_y() - b.center_y()) -
                         (b.center_y() - a.center_y()) * (c.center_x() - b.center_x());
    straight += std::abs(cross) < 1e-9;
  }
  CHECK(straight >= 70);
  for (const auto& b : seq.ground_truth) {
    CHECK(b.w == 36.0);
    CHECK(b.x >= 0.0);
    CHECK(b.y >= 0.0);
    CHECK(b.x + b.w <= 320.0);
    CHECK(b.y + b.h <= 240.0);
  }
}

TEST_CASE("rendering is deterministic in the seed") {
  for (ScenarioKind k : kAllScenarioKinds) {
    const auto a = render(make(k, 12, 7));
    const auto b = render(make(k, 12, 7));
    const auto c = render(make(k, 12, 8));
    for (std::size_t t = 0; t < 12; ++t) CHECK(a.frames[t].to_bytes() == b.frames[t].to_bytes());
    CHECK(a.ground_truth == b.ground_truth);
    CHECK(a.frames[0].to_bytes() != c.frames[0].to_bytes());
  }
}

TEST_CASE("occlusion hides more than half the target at some frame") {
  const auto seq = render(make(ScenarioKind::kOcclusion, 200));
  const double least = *std::min_element(seq.visible_fraction.begin(), seq.visible_fraction.end());
  CHECK(least < 0.5);
  CHECK(seq.visible_fraction.front() == 1.0);
  const auto plain = render(make(ScenarioKind::kLinear, 50));
  for (double v : plain.visible_fraction) CHECK(v == 1.0);
}

TEST_CASE("fast motion outruns the default search sigma for a window") {
  const auto seq = render(make(ScenarioKind::kFastMotion, 200));
  const double sigma = SamplerConfig{}.sigma_for(seq.ground_truth[0]).dx;
  int fast = 0, longest = 0;
  for (std::size_t t = 1; t < seq.ground_truth.size(); ++t) {
    const bool step = center_distance(seq.ground_truth[t - 1], seq.ground_truth[t]) > sigma;
    fast = step ? fast + 1 : 0;
    longest = std::max(longest, fast);
  }
  CHECK(longest >= 3);
}

TEST_CASE("scale change grows the target") {
  const auto seq = render(make(ScenarioKind::kScaleChange, 60));
  double widest = 0.0;
  for (const auto& b : seq.ground_truth) widest = std::max(widest, b.w);
  CHECK(widest > 1.4 * 36.0);
  CHECK(seq.ground_truth.front().w == doctest::Approx(36.0));
}

TEST_CASE("illumination darkens the frame") {
  const auto seq = render(make(ScenarioKind::kIllumination, 40));
  auto mean = [](const Frame& f) {
    double s = 0.0;
    for (int y = 0; y < f.height(); ++y)
      for (int x = 0; x < f.width(); ++x) s += f.at(x, y);
    return s / (f.width() * f.height());
  };
  CHECK(mean(seq.frames[20]) < 0.8 * mean(seq.frames[0]));
}

TEST_CASE("write and reload are exact") {
  test::TempDir dir("synth");
  Scenario s = make(ScenarioKind::kClutter, 6);
  s.width = 96;
  s.height = 72;
  s.target_w = s.target_h = 20;
  const auto seq = render(s);
  write_sequence(seq, dir.path / "seq");
  const auto loaded = load_sequence(dir.path / "seq", dir.path / "seq" / kGroundTruthFile);
  REQUIRE(loaded.size() == 6);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(read_pgm(loaded.frames[t]).to_bytes() == seq.frames[t].to_bytes());
    const auto& a = (*loaded.ground_truth)[t];
    const auto& b = seq.ground_truth[t];
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-6));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-6));
    CHECK(a.w == doctest::Approx(b.w).epsilon(1e-6));
  }
  CHECK(loaded.frames[0].filename() == "0001.pgm");
}
