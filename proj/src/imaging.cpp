#include "imst/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace imst {

Frame::Frame(int width, int height, std::vector<double> intensity)
    : width_(width), height_(height), intensity_(std::move(intensity)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("frame size must be positive");
  if (intensity_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("frame intensity length must equal width*height");
  }
  for (double v : intensity_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("frame intensity outside [0,1]");
  }
}

Frame::Frame(int width, int height, double value)
    : Frame(width, height,
            std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0),
                                value)) {}

std::vector<std::uint8_t> Frame::to_bytes() const {
  std::vector<std::uint8_t> bytes(intensity_.size());
  for (std::size_t i = 0; i < intensity_.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(std::lround(intensity_[i] * 255.0));
  }
  return bytes;
}

Frame Frame::from_bytes(int width, int height, std::span<const std::uint8_t> bytes) {
  std::vector<double> values(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) values[i] = bytes[i] / 255.0;
  return Frame(width, height, std::move(values));
}

namespace {

// Reads the next header token, skipping whitespace and `#` comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int pgm_int(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = pgm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed PGM header in " + path.string());
  }
}

}  // namespace

Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  if (pgm_token(in) != "P5") throw std::runtime_error(path.string() + " is not a binary PGM (P5)");
  const int width = pgm_int(in, path);
  const int height = pgm_int(in, path);
  const int maxval = pgm_int(in, path);
  if (width <= 0 || height <= 0) throw std::runtime_error("bad PGM size in " + path.string());
  if (maxval != 255) throw std::runtime_error("only 8-bit PGM (maxval 255) is supported: " + path.string());
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw std::runtime_error("truncated PGM data in " + path.string());
  }
  return Frame::from_bytes(width, height, bytes);
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  const auto bytes = frame.to_bytes();
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

PixelRect rasterize(const BoundingBox& box) {
  auto edge = [](double v) { return static_cast<int>(std::floor(v + 0.5)); };
  return {edge(box.x), edge(box.y), edge(box.x + box.w), edge(box.y + box.h)};
}

PixelRect clip(const PixelRect& r, int width, int height) {
  PixelRect c{std::clamp(r.x0, 0, width), std::clamp(r.y0, 0, height), std::clamp(r.x1, 0, width),
              std::clamp(r.y1, 0, height)};
  if (c.x1 < c.x0) c.x1 = c.x0;
  if (c.y1 < c.y0) c.y1 = c.y0;
  return c;
}

IntegralImage::IntegralImage(const Frame& frame)
    : IntegralImage(frame.width(), frame.height(), frame.intensity()) {}

IntegralImage::IntegralImage(int width, int height, std::span<const double> values)
    : width_(width), height_(height),
      table_(static_cast<std::size_t>(width + 1) * (height + 1), 0.0) {
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("integral image input size mismatch");
  }
  const std::size_t stride = static_cast<std::size_t>(width) + 1;
  for (int y = 0; y < height; ++y) {
    double row = 0.0;
    for (int x = 0; x < width; ++x) {
      row += values[static_cast<std::size_t>(y) * width + x];
      table_[(y + 1) * stride + (x + 1)] = table_[y * stride + (x + 1)] + row;
    }
  }
}

double IntegralImage::rect_sum(const PixelRect& r) const {
  const PixelRect c = clip(r, width_, height_);
  if (c.empty()) return 0.0;
  return sum_unchecked(c.x0, c.y0, c.x1, c.y1);
}

double IntegralImage::rect_sum(const BoundingBox& box) const { return rect_sum(rasterize(box)); }

IntegralImage integral(const Frame& frame) { return IntegralImage(frame); }

SequenceHandle load_sequence(const std::filesystem::path& directory,
                             const std::optional<std::filesystem::path>& ground_truth) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    throw std::runtime_error("sequence directory not found: " + directory.string());
  }
  SequenceHandle seq;
  seq.directory = directory;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      seq.frames.push_back(entry.path());
    }
  }
  if (seq.frames.empty()) {
    throw std::runtime_error("no .pgm frames in " + directory.string());
  }
  std::sort(seq.frames.begin(), seq.frames.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  if (ground_truth) {
    auto boxes = read_boxes(*ground_truth);
    if (boxes.size() != seq.frames.size()) {
      throw std::runtime_error("ground truth has " + std::to_string(boxes.size()) + " boxes for " +
                               std::to_string(seq.frames.size()) + " frames");
    }
    seq.ground_truth = std::move(boxes);
  }
  return seq;
}

}  // namespace imst
