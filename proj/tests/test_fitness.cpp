#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rbc/fitness.hpp"
#include "rbc/reconstruct.hpp"
#include "test_support.hpp"

namespace rbc {
namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

TEST(Correlation, SelfAndNegation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> f = random_values(50, seed);
    std::vector<double> neg(f);
    for (double& v : neg) v = -v;
    EXPECT_NEAR(correlation(f, f).value(), 1.0, 1e-12);
    EXPECT_NEAR(correlation(f, neg).value(), -1.0, 1e-12);
  }
}

TEST(Correlation, TwoByTwoOracle) {
  const std::vector<double> f{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> g{1.0, 2.0, 3.0, 5.0};
  // Independent evaluation in long double.
  long double fm = 0, gm = 0;
  for (int i = 0; i < 4; ++i) {
    fm += f[i];
    gm += g[i];
  }
  fm /= 4;
  gm /= 4;
  long double num = 0, ff = 0, gg = 0;
  for (int i = 0; i < 4; ++i) {
    num += (f[i] - fm) * (g[i] - gm);
    ff += (f[i] - fm) * (f[i] - fm);
    gg += (g[i] - gm) * (g[i] - gm);
  }
  const double expected = static_cast<double>(num / std::sqrt(ff * gg));
  const double score = correlation(f, g).value();
  EXPECT_NEAR(score, expected, 1e-12);
  // Exact value 6.5 / sqrt(5 * 8.75) = 13 / sqrt(175).
  EXPECT_NEAR(score, 0.982707629823990791, 1e-12);
}

TEST(Correlation, SymmetricAffineInvariantAndBounded) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::vector<double> f = random_values(40, seed);
    const std::vector<double> g = random_values(40, seed + 99);
    const double r = correlation(f, g).value();
    EXPECT_NEAR(correlation(g, f).value(), r, 1e-12);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    std::vector<double> shifted(f);
    for (double& v : shifted) v = 3.5 * v + 7.0;
    EXPECT_NEAR(correlation(shifted, g).value(), r, 1e-12);
    std::vector<double> flipped(f);
    for (double& v : flipped) v = -0.25 * v - 1.0;
    EXPECT_NEAR(correlation(flipped, g).value(), -r, 1e-12);
  }
}

TEST(Correlation, PermutationInvariant) {
  std::mt19937_64 rng(5);
  std::vector<double> f = random_values(30, 1);
  std::vector<double> g = random_values(30, 2);
  const double r = correlation(f, g).value();
  std::vector<std::size_t> idx(30);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<double> pf(30), pg(30);
  for (std::size_t i = 0; i < 30; ++i) {
    pf[i] = f[idx[i]];
    pg[i] = g[idx[i]];
  }
  EXPECT_NEAR(correlation(pf, pg).value(), r, 1e-12);
}

TEST(Correlation, UndefinedForConstantInput) {
  const std::vector<double> flat(16, 0.3);
  const std::vector<double> g = random_values(16, 4);
  EXPECT_FALSE(correlation(flat, g).defined());
  EXPECT_FALSE(correlation(g, flat).defined());
  EXPECT_THROW((void)correlation(flat, g).value(), std::logic_error);
  EXPECT_EQ(correlation(flat, g).rank(), -std::numeric_limits<double>::infinity());
}

TEST(Correlation, Errors) {
  EXPECT_THROW(correlation(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
               std::invalid_argument);
  EXPECT_THROW(correlation(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST(CorrelationScore, Ranking) {
  EXPECT_LT(CorrelationScore::undefined().rank(), CorrelationScore::of(-1.0).rank());
  EXPECT_EQ(CorrelationScore::of(1.0 + 1e-15).value(), 1.0);
  EXPECT_THROW(CorrelationScore::of(std::nan("")), std::invalid_argument);
}

TEST(ReconstructionFitness, ZeroImageIsUndefined) {
  EXPECT_FALSE(reconstruction_fitness(GrayImage::filled(32, 32, 0.0), equidistant_angles(4)).defined());
  EXPECT_FALSE(reconstruction_fitness(GrayImage::filled(16, 16, 0.7), equidistant_angles(8)).defined());
}

TEST(ReconstructionFitness, MatchesManualPipeline) {
  const GrayImage img = make_phantom(PhantomKind::SheppLogan, 32);
  const AngleSet angles{10, 55, 100, 170};
  const Reconstruction rec = inverse_radon(sinogram(img, angles), 32);
  EXPECT_EQ(reconstruction_fitness(img, angles), correlation(img.pixels(), rec.values()));
}

TEST(ReconstructionFitness, FullCoverageBeatsRandomSubsets) {
  std::mt19937_64 rng(17);
  for (PhantomKind kind : phantom_suite()) {
    const GrayImage img = make_phantom(kind, 32);
    const double full = reconstruction_fitness(img, equidistant_angles(180)).value();
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> all(180);
      std::iota(all.begin(), all.end(), 0.0);
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(8);
      const double sub = reconstruction_fitness(img, AngleSet(all)).value();
      EXPECT_GE(full, sub - 0.01) << phantom_name(kind);
    }
  }
}

}  // namespace
}  // namespace rbc
