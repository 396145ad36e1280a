#include "imst/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace imst {

BoundingBox make_box(double x, double y, double w, double h) {
  if (!(w > 0.0) || !(h > 0.0) || !std::isfinite(x) || !std::isfinite(y) ||
      !std::isfinite(w) || !std::isfinite(h)) {
    throw std::invalid_argument("bounding box must be finite with w > 0 and h > 0");
  }
  return {x, y, w, h};
}

Transformation Transformation::clamped() const {
  return {dx, dy, std::clamp(ds, -kMaxLogScale, kMaxLogScale)};
}

BoundingBox compose(const BoundingBox& p, const Transformation& y) {
  const double factor = std::exp(y.ds);
  const double w = p.w * factor;
  const double h = p.h * factor;
  const double cx = p.center_x() + y.dx;
  const double cy = p.center_y() + y.dy;
  return {cx - 0.5 * w, cy - 0.5 * h, w, h};
}

Transformation inverse(const Transformation& y) { return {-y.dx, -y.dy, -y.ds}; }

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

BoundingBox parse_box_line(std::string_view line, std::size_t line_number) {
  double v[4];
  std::size_t count = 0;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == ',' || c == ' ' || c == '\t' || c == '\r'; };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !is_sep(line[end])) ++end;
    if (count == 4) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": expected 4 fields `x,y,w,h`");
    }
    const std::string token(line.substr(pos, end - pos));
    char* stop = nullptr;
    v[count] = std::strtod(token.c_str(), &stop);
    if (stop == token.c_str() || *stop != '\0' || !std::isfinite(v[count])) {
      throw std::runtime_error("line " + std::to_string(line_number) + ": malformed number '" +
                               token + "'");
    }
    ++count;
    pos = end;
  }
  if (count != 4) {
    throw std::runtime_error("line " + std::to_string(line_number) +
                             ": expected 4 fields `x,y,w,h`");
  }
  if (!(v[2] > 0.0) || !(v[3] > 0.0)) {
    throw std::runtime_error("line " + std::to_string(line_number) +
                             ": box width and height must be positive");
  }
  return {v[0], v[1], v[2], v[3]};
}

std::vector<BoundingBox> read_boxes(std::istream& in) {
  std::vector<BoundingBox> boxes;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    boxes.push_back(parse_box_line(line, number));
  }
  return boxes;
}

std::vector<BoundingBox> read_boxes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open box file " + path.string());
  return read_boxes(in);
}

std::string format_box(const BoundingBox& b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f", b.x, b.y, b.w, b.h);
  return buf;
}

void write_boxes(std::ostream& out, const std::vector<BoundingBox>& boxes) {
  for (const auto& b : boxes) out << format_box(b) << '\n';
}

}  // namespace imst
