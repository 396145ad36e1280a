#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "imst/geometry.hpp"

namespace imst {

/// Grayscale frame with intensities in [0, 1], row-major.
class Frame {
 public:
  Frame() = default;
  /// Throws std::invalid_argument if sizes disagree or a value is outside [0, 1].
  Frame(int width, int height, std::vector<double> intensity);
  /// Constant-valued frame.
  Frame(int width, int height, double value);

  int width() const { return width_; }
  int height() const { return height_; }
  double at(int x, int y) const { return intensity_[static_cast<std::size_t>(y) * width_ + x]; }
  std::span<const double> intensity() const { return intensity_; }

  /// 8-bit quantization used by the PGM writer.
  std::vector<std::uint8_t> to_bytes() const;
  static Frame from_bytes(int width, int height, std::span<const std::uint8_t> bytes);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> intensity_;
};

/// Binary PGM (P5, maxval 255).
Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

/// Half-open integer pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 > x0 ? x1 - x0 : 0; }
  int height() const { return y1 > y0 ? y1 - y0 : 0; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool empty() const { return area() == 0; }
  bool operator==(const PixelRect&) const = default;
};

/// Rounds box edges to the nearest pixel boundary (half-up).
PixelRect rasterize(const BoundingBox& box);
PixelRect clip(const PixelRect& r, int width, int height);

/// (width+1) x (height+1) cumulative-sum table; row 0 and column 0 are zero.
class IntegralImage {
 public:
  IntegralImage() = default;
  explicit IntegralImage(const Frame& frame);
  /// Integral of an arbitrary per-pixel channel given row-major values.
  IntegralImage(int width, int height, std::span<const double> values);

  int width() const { return width_; }
  int height() const { return height_; }

  /// Sum over the rectangle after clipping to the frame.
  double rect_sum(const PixelRect& r) const;
  /// Sum over the rasterized, clipped box; boxes fully outside return 0.
  double rect_sum(const BoundingBox& box) const;

  double table(int x, int y) const { return table_[static_cast<std::size_t>(y) * (width_ + 1) + x]; }

  /// Unchecked lookup for a rectangle already inside the frame.
  double sum_unchecked(int x0, int y0, int x1, int y1) const {
    const std::size_t stride = static_cast<std::size_t>(width_) + 1;
    const double* t = table_.data();
    return t[y1 * stride + x1] - t[y0 * stride + x1] - t[y1 * stride + x0] + t[y0 * stride + x0];
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> table_;
};

IntegralImage integral(const Frame& frame);

/// Ordered frame files of one sequence plus optional aligned ground truth.
struct SequenceHandle {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> frames;
  std::optional<std::vector<BoundingBox>> ground_truth;

  std::size_t size() const { return frames.size(); }
};

/// Frames are the `*.pgm` files of `directory` in lexicographic filename order,
/// so numbered names must be zero-padded.
SequenceHandle load_sequence(const std::filesystem::path& directory,
                             const std::optional<std::filesystem::path>& ground_truth = {});

}  // namespace imst
