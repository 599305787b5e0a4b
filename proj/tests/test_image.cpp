#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "rbc/image.hpp"
#include "test_support.hpp"

namespace rbc {
namespace {

using test::TempDir;

TEST(LoadImage, PgmExtremes) {
  TempDir dir;
  test::write_raw_pgm(dir / "white.pgm", 1, 1, {255});
  test::write_raw_pgm(dir / "black.pgm", 1, 1, {0});
  EXPECT_EQ(load_image(dir / "white.pgm"), GrayImage(1, 1, {1.0}));
  EXPECT_EQ(load_image(dir / "black.pgm"), GrayImage(1, 1, {0.0}));
}

TEST(LoadImage, PgmDividesBy255) {
  TempDir dir;
  test::write_raw_pgm(dir / "ramp.pgm", 2, 2, {0, 51, 102, 255});
  const GrayImage img = load_image(dir / "ramp.pgm");
  ASSERT_EQ(img.width(), 2u);
  ASSERT_EQ(img.height(), 2u);
  const double expected[] = {0.0, 0.2, 0.4, 1.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(img.pixels()[i], expected[i], 1e-15);
}

TEST(LoadImage, ColorBmpBecomesLuminance) {
  // 1x1 24-bit BMP, pure green (BGR = 0,255,0), row padded to 4 bytes.
  std::string bmp = "BM";
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bmp += static_cast<char>((v >> (8 * i)) & 0xff);
  };
  auto u16 = [&](std::uint16_t v) {
    bmp += static_cast<char>(v & 0xff);
    bmp += static_cast<char>(v >> 8);
  };
  u32(58); u32(0); u32(54);
  u32(40); u32(1); u32(1); u16(1); u16(24); u32(0); u32(4); u32(2835); u32(2835); u32(0); u32(0);
  bmp += std::string("\x00\xff\x00\x00", 4);

  TempDir dir;
  test::write_bytes(dir / "green.bmp", bmp);
  const GrayImage img = load_image(dir / "green.bmp");
  ASSERT_EQ(img.size(), 1u);
  // BT.601 luma of pure green, within one 8-bit level.
  EXPECT_NEAR(img.pixels()[0], 0.587, 1.0 / 255.0);
}

TEST(LoadImage, Errors) {
  TempDir dir;
  EXPECT_THROW(load_image(dir / "missing.png"), std::runtime_error);
  test::write_bytes(dir / "notes.txt", "hello");
  EXPECT_THROW(load_image(dir / "notes.txt"), std::runtime_error);
  test::write_bytes(dir / "broken.png", "not a png at all");
  EXPECT_THROW(load_image(dir / "broken.png"), std::runtime_error);
  test::write_bytes(dir / "empty.pgm", "P5\n0 0\n255\n");
  EXPECT_THROW(load_image(dir / "empty.pgm"), std::runtime_error);
}

TEST(LoadImage, RoundTripsThroughPgmAtEightBits) {
  TempDir dir;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const GrayImage img = test::random_image(9, seed);
    std::vector<double> quantized(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
      quantized[i] = static_cast<double>(std::lround(img.pixels()[i] * 255.0)) / 255.0;
    }
    save_pgm(img, dir / "img.pgm");
    EXPECT_EQ(load_image(dir / "img.pgm"), GrayImage(9, 9, quantized));
  }
}

TEST(GrayImage, RejectsInvalidPixels) {
  EXPECT_THROW(GrayImage(2, 2, {0.0, 0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(GrayImage(1, 1, {1.5}), std::invalid_argument);
  EXPECT_THROW(GrayImage(1, 1, {-0.1}), std::invalid_argument);
  EXPECT_THROW(GrayImage(1, 1, {std::nan("")}), std::invalid_argument);
  EXPECT_THROW(GrayImage(0, 0, {}), std::invalid_argument);
}

TEST(Normalize, DownsamplesToRequestedSize) {
  const GrayImage out = normalize(test::random_image(64, 1), 32, 32);
  EXPECT_EQ(out.width(), 32u);
  EXPECT_EQ(out.height(), 32u);
}

TEST(Normalize, PreservesConstants) {
  const GrayImage flat = GrayImage::filled(37, 23, 0.5);
  for (auto [r, c] : {std::pair{32, 32}, {5, 7}, {64, 50}, {2, 2}}) {
    const GrayImage out = normalize(flat, r, c);
    for (double v : out.pixels()) EXPECT_NEAR(v, 0.5, 1e-12);
  }
}

TEST(Normalize, AreaAverage) {
  EXPECT_EQ(normalize(GrayImage(2, 2, {1, 1, 0, 0}), 1, 1), GrayImage(1, 1, {0.5}));
  // 4 -> 2 along one axis averages adjacent pairs.
  EXPECT_EQ(normalize(GrayImage(4, 1, {0.0, 1.0, 0.5, 0.25}), 1, 2),
            GrayImage(2, 1, {0.5, 0.375}));
  // 3 -> 2: output pixels cover 1.5 source pixels each.
  const GrayImage out = normalize(GrayImage(3, 1, {0.0, 0.6, 0.3}), 1, 2);
  EXPECT_NEAR(out.pixels()[0], (0.0 + 0.5 * 0.6) / 1.5, 1e-15);
  EXPECT_NEAR(out.pixels()[1], (0.5 * 0.6 + 0.3) / 1.5, 1e-15);
}

TEST(Normalize, BilinearUpsample) {
  // Centres of 4 outputs over 2 inputs sit at -0.25, 0.25, 0.75, 1.25 (clamped).
  const GrayImage out = normalize(GrayImage(2, 1, {0.0, 1.0}), 1, 4);
  const double expected[] = {0.0, 0.25, 0.75, 1.0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(out.pixels()[i], expected[i], 1e-15);
}

TEST(Normalize, IdempotentAtFixedSize) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GrayImage img = test::random_image(20 + seed * 7, seed);
    const GrayImage once = normalize(img, 32, 32);
    const GrayImage twice = normalize(once, 32, 32);
    for (std::size_t i = 0; i < once.size(); ++i) {
      EXPECT_NEAR(once.pixels()[i], twice.pixels()[i], 1e-12);
    }
  }
}

TEST(Normalize, StaysInUnitRange) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GrayImage img = test::random_image(5 + seed * 11, seed);
    for (std::size_t target : {2u, 16u, 33u, 128u}) {
      const GrayImage out = normalize(img, target, target);
      for (double v : out.pixels()) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(Normalize, DegenerateTarget) {
  EXPECT_THROW(normalize(GrayImage::filled(4, 4, 0.1), 0, 4), std::invalid_argument);
}

TEST(Phantom, Disk) {
  const GrayImage disk = make_phantom("disk", 32);
  ASSERT_EQ(disk.width(), 32u);
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t c = 0; c < 32; ++c) {
      const double dx = static_cast<double>(c) - 15.5;
      const double dy = static_cast<double>(r) - 15.5;
      EXPECT_EQ(disk.at(r, c), std::hypot(dx, dy) <= 12.0 ? 1.0 : 0.0) << r << "," << c;
    }
  }
}

TEST(Phantom, Gradient) {
  const GrayImage g = make_phantom(PhantomKind::Gradient, 4);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_DOUBLE_EQ(g.at(r, c), static_cast<double>(r) / 3.0);
  }
}

TEST(Phantom, SheppLogan) {
  const GrayImage sl = make_phantom("shepp-logan", 64);
  const auto [lo, hi] = std::minmax_element(sl.pixels().begin(), sl.pixels().end());
  EXPECT_DOUBLE_EQ(*hi, 1.0);
  EXPECT_DOUBLE_EQ(*lo, 0.0);
  // Corner is outside the head, centre is brain tissue (1 - 0.8).
  EXPECT_EQ(sl.at(0, 0), 0.0);
  EXPECT_NEAR(sl.at(40, 32), 0.2, 1e-12);
  EXPECT_EQ(make_phantom("shepp-logan", 64), sl);
}

TEST(Phantom, SquareAndUnknown) {
  const GrayImage sq = make_phantom("square", 16);
  EXPECT_EQ(sq.at(4, 4), 1.0);
  EXPECT_EQ(sq.at(11, 11), 1.0);
  EXPECT_EQ(sq.at(3, 4), 0.0);
  EXPECT_EQ(sq.at(12, 12), 0.0);
  EXPECT_THROW(make_phantom("teapot", 32), std::invalid_argument);
}

}  // namespace
}  // namespace rbc
