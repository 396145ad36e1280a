#include <cmath>
#include <numeric>

#include "doctest.h"
#include "imst/sampler.hpp"

using namespace imst;

TEST_CASE("zero sigma draws the identity") {
  GaussianSampler rng(3);
  for (const auto& y : rng.gaussian_batch({0, 0, 0}, 50)) CHECK(y == Transformation::identity());
}

TEST_CASE("same seed, same batch") {
  GaussianSampler a(42), b(42), c(43);
  const SearchSigma s{5, 5, 0.1};
  const auto ba = a.gaussian_batch(s, 30);
  CHECK(ba == b.gaussian_batch(s, 30));
  CHECK(ba != c.gaussian_batch(s, 30));
}

TEST_CASE("draw statistics") {
  GaussianSampler rng(2024);
  const auto batch = rng.gaussian_batch({6.0, 2.0, 0.05}, 10000);
  std::vector<double> dx;
  for (const auto& y : batch) dx.push_back(y.dx);
  const double mean = std::accumulate(dx.begin(), dx.end(), 0.0) / dx.size();
  double var = 0.0;
  for (double v : dx) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / (dx.size() - 1));
  CHECK(std::abs(mean) < 0.2);
  CHECK(sd >= 5.5);
  CHECK(sd <= 6.5);
}

TEST_CASE("scale draws are clamped") {
  GaussianSampler rng(5);
  for (const auto& y : rng.gaussian_batch({1, 1, 5.0}, 500)) {
    CHECK(std::abs(y.ds) <= Transformation::kMaxLogScale);
  }
}

TEST_CASE("sampler config") {
  SamplerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  const SearchSigma s = cfg.sigma_for({0, 0, 40, 20}, 2.0);
  CHECK(s.dx == doctest::Approx(cfg.sigma_xy_factor * 40 * 2));
  CHECK(s.dy == s.dx);
  CHECK(s.ds == doctest::Approx(cfg.sigma_scale * 2));
  cfg.n = 7;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.n = 8;
  cfg.sigma_scale = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.sigma_xy_factor = 0.0;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, kSamplerStream) != derive_seed(1, kCriticStream));
  CHECK(derive_seed(1, kSamplerStream) != derive_seed(2, kSamplerStream));
  CHECK(derive_seed(9, 3) == derive_seed(9, 3));
}
