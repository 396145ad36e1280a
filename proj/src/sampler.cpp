#include "imst/sampler.hpp"

#include <algorithm>
#include <stdexcept>

namespace imst {

void SamplerConfig::validate() const {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("sampler.n must be even and at least 2");
  const bool all_zero = sigma_xy_factor == 0.0 && sigma_scale == 0.0;
  const bool all_positive = sigma_xy_factor > 0.0 && sigma_scale > 0.0;
  if (!all_zero && !all_positive) {
    throw std::invalid_argument("sampler sigmas must be all positive or all zero");
  }
}

SearchSigma SamplerConfig::sigma_for(const BoundingBox& target, double inflation) const {
  const double s = sigma_xy_factor * std::max(target.w, target.h) * inflation;
  return {s, s, sigma_scale * inflation};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Transformation GaussianSampler::draw(const SearchSigma& sigma) {
  const double zx = unit_(engine_);
  const double zy = unit_(engine_);
  const double zs = unit_(engine_);
  return Transformation{sigma.dx * zx, sigma.dy * zy, sigma.ds * zs}.clamped();
}

std::vector<Transformation> GaussianSampler::gaussian_batch(const SearchSigma& sigma,
                                                            std::size_t count) {
  std::vector<Transformation> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(draw(sigma));
  return out;
}

}  // namespace imst
