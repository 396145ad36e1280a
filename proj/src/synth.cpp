#include "imst/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "imst/sampler.hpp"

namespace imst {

namespace {

constexpr const char* kKindNames[] = {"linear",       "fast_motion", "occlusion", "illumination",
                                      "blur",         "scale_change", "clutter"};

constexpr int kTextureCells = 8;
constexpr double kPeakScale = 1.6;

using Texture = std::vector<double>;  // kTextureCells x kTextureCells

Texture random_texture(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Texture t(kTextureCells * kTextureCells);
  for (auto& v : t) v = u(rng);
  return t;
}

struct Point {
  double x;
  double y;
};

/// Center bounds keeping a box of the given extent inside the frame.
struct Region {
  double x_lo, x_hi, y_lo, y_hi;

  Point center() const { return {0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)}; }
};

Region region_for(const Scenario& s, double max_scale) {
  const double hw = 0.5 * s.target_w * max_scale + 1.0;
  const double hh = 0.5 * s.target_h * max_scale + 1.0;
  return {hw, s.width - hw, hh, s.height - hh};
}

Point random_point(std::mt19937_64& rng, const Region& r) {
  std::uniform_real_distribution<double> ux(r.x_lo, r.x_hi);
  std::uniform_real_distribution<double> uy(r.y_lo, r.y_hi);
  const double x = ux(rng);
  const double y = uy(rng);
  return {x, y};
}

// Unit direction towards the region center, jittered by up to +-1 rad.
Point inward_direction(std::mt19937_64& rng, const Region& r, const Point& from) {
  const Point c = r.center();
  double angle = std::atan2(c.y - from.y, c.x - from.x);
  if (std::hypot(c.y - from.y, c.x - from.x) < 1e-9) angle = 0.0;
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  angle += jitter(rng);
  return {std::cos(angle), std::sin(angle)};
}

/// Constant-speed walker reflecting off the region walls.
class Walker {
 public:
  Walker(Point p, Point dir, double speed, Region r) : p_(p), dir_(dir), speed_(speed), r_(r) {}

  Point position() const { return p_; }
  void set_speed(double speed) { speed_ = speed; }
  void set_direction(Point dir) { dir_ = dir; }

  void advance() {
    p_.x += dir_.x * speed_;
    p_.y += dir_.y * speed_;
    reflect(p_.x, dir_.x, r_.x_lo, r_.x_hi);
    reflect(p_.y, dir_.y, r_.y_lo, r_.y_hi);
  }

 private:
  static void reflect(double& v, double& d, double lo, double hi) {
    for (int i = 0; i < 4 && (v < lo || v > hi); ++i) {
      if (v < lo) v = 2 * lo - v;
      if (v > hi) v = 2 * hi - v;
      d = -d;
    }
    v = std::clamp(v, lo, hi);
  }

  Point p_;
  Point dir_;
  double speed_;
  Region r_;
};

struct Layer {
  BoundingBox box;
  const Texture* texture;
};

// Pixels whose centers fall inside [b.x, b.x + b.w) x [b.y, b.y + b.h).
PixelRect covered_pixels(const BoundingBox& b, int width, int height) {
  PixelRect r{static_cast<int>(std::ceil(b.x - 0.5)), static_cast<int>(std::ceil(b.y - 0.5)),
              static_cast<int>(std::ceil(b.x + b.w - 0.5)), static_cast<int>(std::ceil(b.y + b.h - 0.5))};
  return clip(r, width, height);
}

void paint(std::vector<double>& img, int width, int height, const Layer& layer,
           std::vector<char>* mask = nullptr) {
  const PixelRect r = covered_pixels(layer.box, width, height);
  for (int y = r.y0; y < r.y1; ++y) {
    const double v = (y + 0.5 - layer.box.y) / layer.box.h;
    const int ty = std::clamp(static_cast<int>(v * kTextureCells), 0, kTextureCells - 1);
    for (int x = r.x0; x < r.x1; ++x) {
      const double u = (x + 0.5 - layer.box.x) / layer.box.w;
      const int tx = std::clamp(static_cast<int>(u * kTextureCells), 0, kTextureCells - 1);
      const std::size_t idx = static_cast<std::size_t>(y) * width + x;
      img[idx] = (*layer.texture)[ty * kTextureCells + tx];
      if (mask) (*mask)[idx] = 1;
    }
  }
}

void horizontal_box_blur(std::vector<double>& img, int width, int height, int length) {
  if (length <= 1) return;
  const int half = length / 2;
  std::vector<double> prefix(width + 1);
  for (int y = 0; y < height; ++y) {
    double* row = img.data() + static_cast<std::size_t>(y) * width;
    prefix[0] = 0.0;
    for (int x = 0; x < width; ++x) prefix[x + 1] = prefix[x] + row[x];
    for (int x = 0; x < width; ++x) {
      const int a = std::max(0, x - half);
      const int b = std::min(width, x + half + 1);
      row[x] = (prefix[b] - prefix[a]) / (b - a);
    }
  }
}

std::vector<double> render_background(std::mt19937_64& rng, int width, int height) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> wavelength(60.0, 140.0);
  std::uniform_real_distribution<double> block(-0.08, 0.08);
  const double px = phase(rng), py = phase(rng);
  const double lx = wavelength(rng), ly = wavelength(rng);
  constexpr int kBlock = 16;
  const int bw = (width + kBlock - 1) / kBlock;
  const int bh = (height + kBlock - 1) / kBlock;
  std::vector<double> blocks(static_cast<std::size_t>(bw) * bh);
  for (auto& b : blocks) b = block(rng);

  std::vector<double> img(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double wave = 0.15 * std::sin(2.0 * std::numbers::pi * x / lx + px) *
                          std::cos(2.0 * std::numbers::pi * y / ly + py);
      img[static_cast<std::size_t>(y) * width + x] =
          0.45 + wave + blocks[static_cast<std::size_t>(y / kBlock) * bw + x / kBlock];
    }
  }
  return img;
}

// Raised-cosine bump: 0 at both ends of the sequence, 1 in the middle.
double bump(std::size_t t, std::size_t n) {
  if (n < 2) return 0.0;
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n - 1)));
}

std::vector<Point> linear_path(std::mt19937_64& rng, const Scenario& s, const Region& r) {
  const Point start = random_point(rng, r);
  const Point dir = inward_direction(rng, r, start);
  // Longest travel along dir that stays inside the region.
  double room = std::numeric_limits<double>::infinity();
  if (dir.x > 1e-12) room = std::min(room, (r.x_hi - start.x) / dir.x);
  if (dir.x < -1e-12) room = std::min(room, (r.x_lo - start.x) / dir.x);
  if (dir.y > 1e-12) room = std::min(room, (r.y_hi - start.y) / dir.y);
  if (dir.y < -1e-12) room = std::min(room, (r.y_lo - start.y) / dir.y);
  const double n1 = static_cast<double>(s.frame_count - 1);
  const double distance = std::min(s.speed * n1, std::max(0.0, room));
  std::vector<Point> path(s.frame_count);
  for (std::size_t t = 0; t < s.frame_count; ++t) {
    const double f = distance * static_cast<double>(t) / n1;
    path[t] = {start.x + dir.x * f, start.y + dir.y * f};
  }
  return path;
}

std::vector<Point> walk(std::mt19937_64& rng, const Scenario& s, const Region& r, double speed) {
  const Point start = random_point(rng, r);
  Walker w(start, inward_direction(rng, r, start), speed, r);
  std::vector<Point> path(s.frame_count);
  for (std::size_t t = 0; t < s.frame_count; ++t) {
    path[t] = w.position();
    w.advance();
  }
  return path;
}

std::vector<Point> fast_path(std::mt19937_64& rng, const Scenario& s, const Region& r) {
  const double amplitude = s.motion_amplitude > 0.0
                               ? s.motion_amplitude
                               : 1.4 * SamplerConfig{}.sigma_xy_factor * std::max(s.target_w, s.target_h);
  const std::size_t n = s.frame_count;
  const std::size_t len = std::max<std::size_t>(3, n / 25);
  const std::size_t windows[] = {n / 3, (2 * n) / 3};
  const Point start = random_point(rng, r);
  Walker w(start, inward_direction(rng, r, start), s.speed, r);
  std::vector<Point> path(n);
  for (std::size_t t = 0; t < n; ++t) {
    path[t] = w.position();
    for (std::size_t begin : windows) {
      if (t == begin) {
        w.set_direction(inward_direction(rng, r, w.position()));
        w.set_speed(amplitude);
      } else if (t == begin + len) {
        w.set_speed(s.speed);
      }
    }
    w.advance();
  }
  return path;
}

}  // namespace

std::string to_string(ScenarioKind kind) { return kKindNames[static_cast<int>(kind)]; }

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (int i = 0; i < 7; ++i) {
    if (name == kKindNames[i]) return static_cast<ScenarioKind>(i);
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

void Scenario::validate() const {
  if (frame_count < 2) throw std::invalid_argument("scenario needs at least 2 frames");
  if (width <= 0 || height <= 0) throw std::invalid_argument("frame size must be positive");
  if (!(target_w > 0.0) || !(target_h > 0.0)) throw std::invalid_argument("target size must be positive");
  const double scale = kind == ScenarioKind::kScaleChange ? kPeakScale : 1.0;
  if (target_w * scale + 4.0 > width || target_h * scale + 4.0 > height) {
    throw std::invalid_argument("target does not fit in the frame");
  }
  if (speed < 0.0 || motion_amplitude < 0.0 || noise < 0.0) {
    throw std::invalid_argument("speed, amplitude and noise must be nonnegative");
  }
  if (!(occluder_fraction > 0.0 && occluder_fraction <= 1.0)) {
    throw std::invalid_argument("occluder_fraction must be in (0, 1]");
  }
  if (intensity_ramp < 0.0 || intensity_ramp >= 1.0) {
    throw std::invalid_argument("intensity_ramp must be in [0, 1)");
  }
  if (distractors < 0) throw std::invalid_argument("distractor count must be nonnegative");
}

SyntheticSequence render(const Scenario& s) {
  s.validate();
  std::mt19937_64 rng(s.seed);
  const std::size_t n = s.frame_count;
  const double max_scale = s.kind == ScenarioKind::kScaleChange ? kPeakScale : 1.0;
  const Region region = region_for(s, max_scale);

  const auto background = render_background(rng, s.width, s.height);
  const Texture target_texture = random_texture(rng, 0.1, 0.9);

  std::vector<Point> centers;
  switch (s.kind) {
    case ScenarioKind::kLinear:
      centers = linear_path(rng, s, region);
      break;
    case ScenarioKind::kFastMotion:
      centers = fast_path(rng, s, region);
      break;
    case ScenarioKind::kOcclusion:
      centers = walk(rng, s, region, 0.5 * s.speed);
      break;
    case ScenarioKind::kScaleChange:
      centers = walk(rng, s, region, 0.5 * s.speed);
      break;
    default:
      centers = walk(rng, s, region, s.speed);
      break;
  }

  // Distractors share the target's texture statistics.
  std::vector<Texture> distractor_textures;
  std::vector<std::vector<Point>> distractor_paths;
  if (s.kind == ScenarioKind::kClutter) {
    const Region full = region_for(s, 1.0);
    for (int i = 0; i < s.distractors; ++i) {
      distractor_textures.push_back(random_texture(rng, 0.1, 0.9));
      distractor_paths.push_back(walk(rng, s, full, s.speed));
    }
  }

  // Occluding pole: full frame height, passes the target center at n/3 and
  // wraps around to sweep again.
  const Texture pole_texture = random_texture(rng, 0.05, 0.35);
  const double pole_w = s.occluder_fraction * s.target_w;
  const double pole_speed = 3.0;
  const double pole_anchor = centers[n / 3].x;

  std::normal_distribution<double> noise(0.0, 1.0);
  SyntheticSequence seq;
  seq.frames.reserve(n);
  std::vector<double> img;
  std::vector<char> target_mask;
  for (std::size_t t = 0; t < n; ++t) {
    img = background;
    for (std::size_t i = 0; i < distractor_paths.size(); ++i) {
      const Point c = distractor_paths[i][t];
      paint(img, s.width, s.height,
            {{c.x - 0.5 * s.target_w, c.y - 0.5 * s.target_h, s.target_w, s.target_h},
             &distractor_textures[i]});
    }

    const double scale = s.kind == ScenarioKind::kScaleChange ? 1.0 + (kPeakScale - 1.0) * bump(t, n) : 1.0;
    const double w = s.target_w * scale;
    const double h = s.target_h * scale;
    const BoundingBox box{centers[t].x - 0.5 * w, centers[t].y - 0.5 * h, w, h};
    target_mask.assign(img.size(), 0);
    paint(img, s.width, s.height, {box, &target_texture}, &target_mask);
    const long long target_pixels = std::count(target_mask.begin(), target_mask.end(), 1);

    long long hidden = 0;
    if (s.kind == ScenarioKind::kOcclusion) {
      const double period = s.width + 2.0 * pole_w;
      double cx = pole_anchor + pole_speed * (static_cast<double>(t) - static_cast<double>(n / 3));
      cx = std::fmod(cx + pole_w, period);
      if (cx < 0.0) cx += period;
      cx -= pole_w;
      const BoundingBox pole{cx - 0.5 * pole_w, -1.0, pole_w, s.height + 2.0};
      std::vector<char> pole_mask(img.size(), 0);
      paint(img, s.width, s.height, {pole, &pole_texture}, &pole_mask);
      for (std::size_t i = 0; i < img.size(); ++i) hidden += (pole_mask[i] && target_mask[i]) ? 1 : 0;
    }
    seq.visible_fraction.push_back(
        target_pixels > 0 ? 1.0 - static_cast<double>(hidden) / static_cast<double>(target_pixels) : 0.0);

    if (s.kind == ScenarioKind::kIllumination) {
      const double gain = 1.0 - s.intensity_ramp * bump(t, n);
      for (auto& v : img) v *= gain;
    }
    if (s.kind == ScenarioKind::kBlur) {
      const int length = 1 + 2 * static_cast<int>(std::lround(4.0 * bump(t, n)));
      horizontal_box_blur(img, s.width, s.height, length);
    }

    std::vector<std::uint8_t> bytes(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
      const double v = std::clamp(img[i] + s.noise * noise(rng), 0.0, 1.0);
      bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    seq.frames.push_back(Frame::from_bytes(s.width, s.height, bytes));
    seq.ground_truth.push_back(box);
  }
  return seq;
}

void write_sequence(const SyntheticSequence& seq, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create " + directory.string() + ": " + ec.message());
  const std::size_t digits = std::max<std::size_t>(4, std::to_string(seq.frames.size()).size());
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    std::string name = std::to_string(i + 1);
    name.insert(0, digits - name.size(), '0');
    write_pgm(directory / (name + ".pgm"), seq.frames[i]);
  }
  std::ofstream gt(directory / kGroundTruthFile);
  if (!gt) throw std::runtime_error("cannot write ground truth in " + directory.string());
  write_boxes(gt, seq.ground_truth);
  if (!gt) throw std::runtime_error("failed writing ground truth in " + directory.string());
}

void generate(const Scenario& scenario, const std::filesystem::path& directory) {
  write_sequence(render(scenario), directory);
}

}  // namespace imst
