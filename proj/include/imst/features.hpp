#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "imst/geometry.hpp"
#include "imst/imaging.hpp"

namespace imst {

using FeatureVector = std::vector<double>;

/// Haar-like layouts evaluated per grid cell. Contrasts are half the
/// difference of the two regions' mean intensities, so they vanish on
/// constant patches and equal (sum_a - sum_b) / cell_area for equal splits.
enum class HaarKind : int {
  kTwoRectHorizontal = 0,  // left half minus right half
  kTwoRectVertical,        // top half minus bottom half
  kThreeRect,              // outer thirds minus middle third (horizontal)
  kCheckerboard,           // TL+BR minus TR+BL
  kCenterSurround,         // central half-size block minus its surround
  kMean,                   // raw mean intensity
};
inline constexpr int kHaarKindCount = 6;

struct FeatureConfig {
  int grid_rows = 4;
  int grid_cols = 4;
  // Contrast layouts only: raw cell means and the histogram are shared by
  // nearly every patch and flatten the kernel.
  std::array<bool, kHaarKindCount> haar_kinds{true, true, true, true, true, false};
  bool include_histogram = false;
  int histogram_bins = 8;

  int active_kinds() const;
  /// grid_rows * grid_cols * active_kinds + histogram_bins * include_histogram.
  std::size_t dimension() const;
  /// Throws std::invalid_argument on non-positive grid/bins or an empty layout.
  void validate() const;
};

/// Raised when a patch has no pixels inside the frame.
class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integral tables for one frame: intensity plus one indicator channel per
/// histogram bin.
class FrameFeatures {
 public:
  FrameFeatures(const Frame& frame, const FeatureConfig& cfg);

  const IntegralImage& intensity() const { return intensity_; }
  const std::vector<IntegralImage>& bins() const { return bins_; }
  const FeatureConfig& config() const { return cfg_; }
  int width() const { return intensity_.width(); }
  int height() const { return intensity_.height(); }

 private:
  FeatureConfig cfg_;
  IntegralImage intensity_;
  std::vector<IntegralImage> bins_;
};

/// Histogram bin of an intensity value: min(bins - 1, floor(v * bins)).
int histogram_bin(double v, int bins);

/// Feature vector of the patch under `box`, clipped to the frame and
/// L2-normalized unless all-zero. Throws DegenerateSample if nothing is left
/// after clipping.
FeatureVector extract(const FrameFeatures& image, const BoundingBox& box);

}  // namespace imst
