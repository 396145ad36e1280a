#include "imst/features.hpp"

#include <algorithm>
#include <cmath>

namespace imst {

int FeatureConfig::active_kinds() const {
  return static_cast<int>(std::count(haar_kinds.begin(), haar_kinds.end(), true));
}

std::size_t FeatureConfig::dimension() const {
  return static_cast<std::size_t>(grid_rows) * grid_cols * active_kinds() +
         (include_histogram ? static_cast<std::size_t>(histogram_bins) : 0);
}

void FeatureConfig::validate() const {
  if (grid_rows <= 0 || grid_cols <= 0) throw std::invalid_argument("feature grid must be positive");
  if (include_histogram && histogram_bins <= 0) {
    throw std::invalid_argument("histogram_bins must be positive");
  }
  if (dimension() == 0) throw std::invalid_argument("feature layout selects no features");
}

int histogram_bin(double v, int bins) {
  return std::clamp(static_cast<int>(std::floor(v * bins)), 0, bins - 1);
}

FrameFeatures::FrameFeatures(const Frame& frame, const FeatureConfig& cfg)
    : cfg_(cfg), intensity_(frame) {
  cfg_.validate();
  if (!cfg_.include_histogram) return;
  const auto values = frame.intensity();
  std::vector<double> indicator(values.size());
  bins_.reserve(cfg_.histogram_bins);
  for (int b = 0; b < cfg_.histogram_bins; ++b) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      indicator[i] = histogram_bin(values[i], cfg_.histogram_bins) == b ? 1.0 : 0.0;
    }
    bins_.emplace_back(frame.width(), frame.height(), indicator);
  }
}

namespace {

constexpr double kContrastFloor = 1e-9;

struct CellSums {
  const IntegralImage& ii;

  double sum(int x0, int y0, int x1, int y1) const {
    if (x1 <= x0 || y1 <= y0) return 0.0;
    return ii.sum_unchecked(x0, y0, x1, y1);
  }
  static double area(int x0, int y0, int x1, int y1) {
    return (x1 > x0 && y1 > y0) ? static_cast<double>(x1 - x0) * (y1 - y0) : 0.0;
  }
  double mean(int x0, int y0, int x1, int y1) const {
    const double a = area(x0, y0, x1, y1);
    return a > 0.0 ? sum(x0, y0, x1, y1) / a : 0.0;
  }
};

double haar(const CellSums& s, HaarKind kind, int x0, int y0, int x1, int y1) {
  const int w = x1 - x0;
  const int h = y1 - y0;
  switch (kind) {
    case HaarKind::kTwoRectHorizontal: {
      if (w < 2) return 0.0;
      const int xm = x0 + w / 2;
      return 0.5 * (s.mean(x0, y0, xm, y1) - s.mean(xm, y0, x1, y1));
    }
    case HaarKind::kTwoRectVertical: {
      if (h < 2) return 0.0;
      const int ym = y0 + h / 2;
      return 0.5 * (s.mean(x0, y0, x1, ym) - s.mean(x0, ym, x1, y1));
    }
    case HaarKind::kThreeRect: {
      if (w < 3) return 0.0;
      const int xa = x0 + w / 3;
      const int xb = x0 + (2 * w) / 3;
      const double outer_sum = s.sum(x0, y0, xa, y1) + s.sum(xb, y0, x1, y1);
      const double outer_area = CellSums::area(x0, y0, xa, y1) + CellSums::area(xb, y0, x1, y1);
      return 0.5 * (outer_sum / outer_area - s.mean(xa, y0, xb, y1));
    }
    case HaarKind::kCheckerboard: {
      if (w < 2 || h < 2) return 0.0;
      const int xm = x0 + w / 2;
      const int ym = y0 + h / 2;
      const double pos = s.sum(x0, y0, xm, ym) + s.sum(xm, ym, x1, y1);
      const double pos_area = CellSums::area(x0, y0, xm, ym) + CellSums::area(xm, ym, x1, y1);
      const double neg = s.sum(xm, y0, x1, ym) + s.sum(x0, ym, xm, y1);
      const double neg_area = CellSums::area(xm, y0, x1, ym) + CellSums::area(x0, ym, xm, y1);
      return 0.5 * (pos / pos_area - neg / neg_area);
    }
    case HaarKind::kCenterSurround: {
      const int bx = w / 4;
      const int by = h / 4;
      if (bx == 0 || by == 0) return 0.0;
      const double total = s.sum(x0, y0, x1, y1);
      const double center = s.sum(x0 + bx, y0 + by, x1 - bx, y1 - by);
      const double center_area = CellSums::area(x0 + bx, y0 + by, x1 - bx, y1 - by);
      const double surround_area = CellSums::area(x0, y0, x1, y1) - center_area;
      return 0.5 * (center / center_area - (total - center) / surround_area);
    }
    case HaarKind::kMean:
      return s.mean(x0, y0, x1, y1);
  }
  return 0.0;
}

}  // namespace

FeatureVector extract(const FrameFeatures& image, const BoundingBox& box) {
  const FeatureConfig& cfg = image.config();
  const PixelRect r = clip(rasterize(box), image.width(), image.height());
  if (r.empty()) throw DegenerateSample("patch has no pixels inside the frame");

  FeatureVector out;
  out.reserve(cfg.dimension());
  const CellSums sums{image.intensity()};
  const int W = r.width();
  const int H = r.height();
  for (int row = 0; row < cfg.grid_rows; ++row) {
    const int cy0 = r.y0 + (row * H) / cfg.grid_rows;
    const int cy1 = r.y0 + ((row + 1) * H) / cfg.grid_rows;
    for (int col = 0; col < cfg.grid_cols; ++col) {
      const int cx0 = r.x0 + (col * W) / cfg.grid_cols;
      const int cx1 = r.x0 + ((col + 1) * W) / cfg.grid_cols;
      const bool empty_cell = cx1 <= cx0 || cy1 <= cy0;
      for (int k = 0; k < kHaarKindCount; ++k) {
        if (!cfg.haar_kinds[k]) continue;
        const double v = empty_cell ? 0.0 : haar(sums, static_cast<HaarKind>(k), cx0, cy0, cx1, cy1);
        // integral-image round-off on flat cells would otherwise survive normalization
        out.push_back(std::abs(v) < kContrastFloor ? 0.0 : v);
      }
    }
  }
  if (cfg.include_histogram) {
    const double area = static_cast<double>(r.area());
    for (const auto& bin : image.bins()) {
      out.push_back(bin.sum_unchecked(r.x0, r.y0, r.x1, r.y1) / area);
    }
  }

  double norm2 = 0.0;
  for (double v : out) norm2 += v * v;
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : out) v *= inv;
  }
  return out;
}

}  // namespace imst
