#include <fstream>
#include <random>

#include "doctest.h"
#include "imst/imaging.hpp"
#include "test_util.hpp"

using namespace imst;
using imst::test::TempDir;

namespace {

double brute_sum(const Frame& f, int x0, int y0, int x1, int y1) {
  double s = 0.0;
  for (int y = std::max(0, y0); y < std::min(f.height(), y1); ++y) {
    for (int x = std::max(0, x0); x < std::min(f.width(), x1); ++x) s += f.at(x, y);
  }
  return s;
}

void write_gt(const std::filesystem::path& p, int lines) {
  std::ofstream out(p);
  for (int i = 0; i < lines; ++i) out << i << ",0,10,10\n";
}

}  // namespace

TEST_CASE("Frame validates its input") {
  CHECK_THROWS_AS(Frame(2, 2, std::vector<double>{0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Frame(2, 1, std::vector<double>{0.5, 1.5}), std::invalid_argument);
  CHECK_THROWS_AS(Frame(1, 1, std::vector<double>{-0.1}), std::invalid_argument);
  const Frame f(3, 2, 0.25);
  CHECK(f.at(2, 1) == 0.25);
}

TEST_CASE("integral image on a constant frame") {
  const IntegralImage ii(Frame(32, 24, 1.0));
  CHECK(ii.rect_sum(PixelRect{3, 4, 13, 14}) == 100.0);
  CHECK(ii.rect_sum(PixelRect{5, 5, 5, 9}) == 0.0);
  CHECK(ii.rect_sum(PixelRect{9, 5, 5, 9}) == 0.0);
  CHECK(ii.rect_sum(PixelRect{0, 0, 32, 24}) == 32.0 * 24.0);
}

TEST_CASE("integral image matches a brute-force sum") {
  const Frame f = test::random_frame(16, 16, 3);
  const IntegralImage ii(f);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-4, 20);
  for (int i = 0; i < 500; ++i) {
    const int x0 = c(rng), y0 = c(rng), x1 = c(rng), y1 = c(rng);
    CHECK(ii.rect_sum(PixelRect{x0, y0, x1, y1}) == doctest::Approx(brute_sum(f, x0, y0, x1, y1)));
  }
  for (int y = 0; y <= 16; ++y) {
    for (int x = 0; x <= 16; ++x) CHECK(ii.table(x, y) == doctest::Approx(brute_sum(f, 0, 0, x, y)));
  }
}

TEST_CASE("box sums rasterize and clip") {
  const Frame f = test::random_frame(20, 10, 9);
  const IntegralImage ii(f);
  CHECK(rasterize({1.4, 2.6, 3.2, 4.0}) == PixelRect{1, 3, 5, 7});
  CHECK(ii.rect_sum(BoundingBox{1.4, 2.6, 3.2, 4.0}) == doctest::Approx(brute_sum(f, 1, 3, 5, 7)));
  CHECK(ii.rect_sum(BoundingBox{-5, -5, 8, 8}) == doctest::Approx(brute_sum(f, 0, 0, 3, 3)));
  CHECK(ii.rect_sum(BoundingBox{50, 50, 8, 8}) == 0.0);
  const PixelRect c = clip({-3, 4, 40, 2}, 20, 10);
  CHECK(c.x0 == 0);
  CHECK(c.x1 == 20);
  CHECK(c.empty());
}

TEST_CASE("PGM round trip is exact for quantized frames") {
  TempDir dir("pgm");
  const Frame f = Frame::from_bytes(5, 3, std::vector<std::uint8_t>{0,  1,  2,  3,   4,   50,  60, 70,
                                                                    80, 90, 100, 200, 254, 255, 7});
  write_pgm(dir.path / "a.pgm", f);
  const Frame g = read_pgm(dir.path / "a.pgm");
  CHECK(g.width() == 5);
  CHECK(g.height() == 3);
  CHECK(g.to_bytes() == f.to_bytes());

  std::ofstream(dir.path / "bad.pgm") << "P2\n1 1\n255\n0\n";
  CHECK_THROWS_AS(read_pgm(dir.path / "bad.pgm"), std::runtime_error);
  std::ofstream(dir.path / "short.pgm", std::ios::binary) << "P5\n4 4\n255\nab";
  CHECK_THROWS_WITH(read_pgm(dir.path / "short.pgm"), doctest::Contains("truncated"));
  CHECK_THROWS_AS(read_pgm(dir.path / "missing.pgm"), std::runtime_error);
}

TEST_CASE("PGM header comments are skipped") {
  TempDir dir("pgmc");
  {
    std::ofstream out(dir.path / "c.pgm", std::ios::binary);
    out << "P5\n# made by hand\n2 1\n255\n";
    out.put(static_cast<char>(0));
    out.put(static_cast<char>(255));
  }
  const Frame f = read_pgm(dir.path / "c.pgm");
  CHECK(f.at(0, 0) == 0.0);
  CHECK(f.at(1, 0) == 1.0);
}

TEST_CASE("load_sequence") {
  TempDir dir("seq");
  for (int i = 1; i <= 10; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "%04d.pgm", i);
    write_pgm(dir.path / name, Frame(4, 4, i / 10.0));
  }
  write_gt(dir.path / "gt10.txt", 10);
  write_gt(dir.path / "gt9.txt", 9);

  const auto seq = load_sequence(dir.path, dir.path / "gt10.txt");
  CHECK(seq.size() == 10);
  REQUIRE(seq.ground_truth.has_value());
  CHECK(seq.ground_truth->size() == 10);
  CHECK(seq.frames.front().filename() == "0001.pgm");
  CHECK(seq.frames.back().filename() == "0010.pgm");
  CHECK(read_pgm(seq.frames[2]).at(0, 0) == doctest::Approx(0.3).epsilon(0.01));

  CHECK_THROWS_WITH(load_sequence(dir.path, dir.path / "gt9.txt"), doctest::Contains("9 boxes for 10 frames"));

  TempDir empty("empty");
  CHECK_THROWS_WITH(load_sequence(empty.path), doctest::Contains("no .pgm frames"));
  CHECK_THROWS_AS(load_sequence(empty.path / "nope"), std::runtime_error);
}
