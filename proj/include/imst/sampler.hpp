#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "imst/geometry.hpp"

namespace imst {

/// Standard deviations of the search Gaussian in transformation coordinates.
struct SearchSigma {
  double dx = 0.0;
  double dy = 0.0;
  double ds = 0.0;
};

struct SamplerConfig {
  std::size_t n = 120;           // samples per frame, even
  double sigma_xy_factor = 0.1;  // sigma_dx = sigma_dy = factor * max(w, h)
  double sigma_scale = 0.05;     // sigma_ds

  void validate() const;
  SearchSigma sigma_for(const BoundingBox& target, double inflation = 1.0) const;
};

/// Independent RNG streams from one user seed (splitmix64 finalizer), so the
/// sampler and the critic never share a stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline constexpr std::uint64_t kSamplerStream = 1;
inline constexpr std::uint64_t kCriticStream = 2;

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  /// y ~ N(0, diag(sigma^2)) with ds clamped to the transformation range.
  /// Zero sigmas yield the identity but still advance the stream.
  Transformation draw(const SearchSigma& sigma);
  std::vector<Transformation> gaussian_batch(const SearchSigma& sigma, std::size_t count);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

}  // namespace imst
