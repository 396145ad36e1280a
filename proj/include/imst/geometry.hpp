#pragma once

#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace imst {

/// Axis-aligned, real-valued target box. (x, y) is the top-left corner.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
  double h = 1.0;

  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }
  double area() const { return w * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Checked constructor; throws std::invalid_argument for non-positive sizes.
BoundingBox make_box(double x, double y, double w, double h);

/// Relative move of a target: center shift in pixels plus log-scale change.
struct Transformation {
  static constexpr double kMaxLogScale = std::numbers::ln2;

  double dx = 0.0;
  double dy = 0.0;
  double ds = 0.0;

  static constexpr Transformation identity() { return {}; }

  /// Returns a copy with ds clamped to [-ln 2, ln 2].
  Transformation clamped() const;

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

/// Moves the box center by (dx, dy) and scales w, h by exp(ds) about the center.
BoundingBox compose(const BoundingBox& p, const Transformation& y);

/// compose(compose(p, y), inverse(y)) == p up to rounding.
Transformation inverse(const Transformation& y);

double iou(const BoundingBox& a, const BoundingBox& b);
double center_distance(const BoundingBox& a, const BoundingBox& b);

// OTB-style box text: one `x,y,w,h` per line. Whitespace or tabs are also
// accepted as separators on input.
BoundingBox parse_box_line(std::string_view line, std::size_t line_number);
std::vector<BoundingBox> read_boxes(std::istream& in);
std::vector<BoundingBox> read_boxes(const std::filesystem::path& path);
std::string format_box(const BoundingBox& b);
void write_boxes(std::ostream& out, const std::vector<BoundingBox>& boxes);

}  // namespace imst
