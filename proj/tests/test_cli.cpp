#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "rbc/barcode.hpp"
#include "rbc/cli.hpp"
#include "rbc/search.hpp"
#include "test_support.hpp"

namespace rbc {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome rbc(std::vector<std::string> args) {
  args.insert(args.begin(), "rbc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const fs::path& path) { return nlohmann::json::parse(test::slurp(path)); }

TEST(ParseAngleSpec, Forms) {
  EXPECT_EQ(cli::parse_angle_spec("equidistant:4"), (AngleSet{0, 45, 90, 135}));
  EXPECT_EQ(cli::parse_angle_spec("160,30,50,120"), (AngleSet{30, 50, 120, 160}));
  EXPECT_EQ(cli::parse_angle_spec("11.25"), (AngleSet{11.25}));
  EXPECT_THROW(cli::parse_angle_spec("equidistant:x"), std::invalid_argument);
  EXPECT_THROW(cli::parse_angle_spec("10,,20"), std::invalid_argument);
  EXPECT_THROW(cli::parse_angle_spec("10,200"), std::invalid_argument);
}

TEST(Cli, BarcodeEightAngles) {
  test::TempDir dir;
  test::write_raw_pgm(dir / "img.pgm", 2, 2, {0, 255, 128, 64});
  const Outcome o = rbc({"barcode", (dir / "img.pgm").string(), "--angles", "equidistant:8", "--out",
                         (dir / "code").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("fragments: 8 x 47"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("total_bits: 376"), std::string::npos);
  const RadonBarcode code = read_barcode_text(dir / "code.txt");
  EXPECT_EQ(code.total_bits(), 376u);
  EXPECT_TRUE(fs::exists(dir / "code.pgm"));
}

TEST(Cli, BarcodeOfBlackImageIsAllZero) {
  test::TempDir dir;
  test::write_raw_pgm(dir / "black.pgm", 3, 3, std::vector<unsigned char>(9, 0));
  const Outcome o =
      rbc({"barcode", (dir / "black.pgm").string(), "--angles", "0", "--out", (dir / "z").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(test::slurp(dir / "z.txt"), "0|" + std::string(47, '0') + "\n");
}

TEST(Cli, BarcodeExplicitAngles) {
  test::TempDir dir;
  const Outcome o = rbc({"barcode", "phantom:shepp-logan", "--angles", "30,50,120,160", "--out",
                         (dir / "sl").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const RadonBarcode code = read_barcode_text(dir / "sl.txt");
  EXPECT_EQ(code.angles(), (AngleSet{30, 50, 120, 160}));
  EXPECT_EQ(code, generate_barcode(make_phantom(PhantomKind::SheppLogan, 32), AngleSet{30, 50, 120, 160}));
}

TEST(Cli, OptimizeBruteForce) {
  test::TempDir dir;
  const Outcome o = rbc({"optimize", "phantom:disk", "-n", "4", "--method", "bf", "--candidates",
                         "equidistant:16", "--out", (dir / "bf").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const nlohmann::json j = read_json(dir / "bf" / "result.json");
  EXPECT_EQ(j["evaluations"], 1820);
  EXPECT_EQ(j["history"].size(), 1820u);
  EXPECT_EQ(j["best_angles"].size(), 4u);
  EXPECT_EQ(j["config"]["budget_cap"], 10000);
  const SearchResult direct = exhaustive_search(make_phantom(PhantomKind::Disk, 32), 4, equidistant_angles(16));
  EXPECT_EQ(j["best_score"].get<double>(), direct.best_score.value());
  EXPECT_TRUE(fs::exists(dir / "bf" / "history.csv"));
}

TEST(Cli, OptimizeMde) {
  test::TempDir dir;
  const Outcome o = rbc({"optimize", "phantom:shepp-logan", "-n", "4", "--method", "mde", "--np", "6",
                         "--f", "0.5", "--cr", "0.9", "--nfc", "300", "--seed", "1", "--out",
                         (dir / "mde").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const nlohmann::json j = read_json(dir / "mde" / "result.json");
  EXPECT_LE(j["evaluations"].get<int>(), 300);
  EXPECT_EQ(j["config"]["de"]["population_size"], 6);
  EXPECT_EQ(j["config"]["de"]["seed"], 1);
  EXPECT_EQ(j["config"]["de"]["quantization_step"], 10.0);
  for (const auto& a : j["best_angles"]) {
    EXPECT_EQ(std::fmod(a.get<double>(), 10.0), 0.0);
  }

  const Outcome again = rbc({"optimize", "phantom:shepp-logan", "-n", "4", "--method", "mde", "--seed",
                             "1", "--jobs", "3", "--out", (dir / "mde3").string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(test::slurp(dir / "mde" / "result.json"), test::slurp(dir / "mde3" / "result.json"));
}

TEST(Cli, OptimizeRefusals) {
  test::TempDir dir;
  const Outcome over = rbc({"optimize", "phantom:disk", "-n", "4", "--method", "bf", "--candidates",
                            "equidistant:180", "--out", (dir / "x").string()});
  EXPECT_EQ(over.code, 3);
  EXPECT_NE(over.err.find("error"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "x" / "result.json"));

  EXPECT_NE(rbc({"optimize", "phantom:disk", "-n", "4", "--method", "bf", "--step", "10", "--out",
                 (dir / "y").string()}).code, 0);
  EXPECT_NE(rbc({"optimize", "phantom:disk", "-n", "4", "--method", "mde", "--candidates", "0,10",
                 "--out", (dir / "y").string()}).code, 0);
  EXPECT_NE(rbc({"optimize", "phantom:disk", "-n", "4", "--method", "ga", "--out", (dir / "y").string()}).code, 0);
}

TEST(Cli, ExperimentSeriesAreReproducible) {
  test::TempDir dir;
  for (const std::string series : {"1", "2"}) {
    const Outcome a = rbc({"experiment", "--series", series, "--images", "phantoms", "--runs", "2",
                           "--size", "16", "--jobs", "1", "--out", (dir / ("a" + series)).string()});
    ASSERT_EQ(a.code, 0) << a.err;
    const Outcome b = rbc({"experiment", "--series", series, "--images", "phantoms", "--runs", "2",
                           "--size", "16", "--jobs", "4", "--out", (dir / ("b" + series)).string()});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
    for (const char* file : {"report.json", "per_run.csv"}) {
      EXPECT_EQ(test::slurp(dir / ("a" + series) / file), test::slurp(dir / ("b" + series) / file));
    }
    const nlohmann::json j = read_json(dir / ("a" + series) / "report.json");
    EXPECT_EQ(j["series"], std::stoi(series));
    EXPECT_EQ(j["config"]["size"], 16);
    EXPECT_EQ(j["config"]["runs"], 2);
    EXPECT_FALSE(j["config"].contains("jobs"));
  }
}

TEST(Cli, Errors) {
  test::TempDir dir;
  EXPECT_EQ(rbc({"barcode", (dir / "missing.png").string(), "--out", (dir / "m").string()}).code, 1);
  EXPECT_NE(rbc({}).code, 0);
  EXPECT_NE(rbc({"barcode"}).code, 0);
  EXPECT_EQ(rbc({"experiment", "--series", "3", "--out", (dir / "e").string()}).code, 2);
  EXPECT_EQ(rbc({"--help"}).code, 0);
}

TEST(Cli, SizeFromEnvironment) {
  test::TempDir dir;
  ::setenv("RBC_SIZE", "16", 1);
  const Outcome o = rbc({"barcode", "phantom:disk", "--angles", "0", "--out", (dir / "d").string()});
  ::unsetenv("RBC_SIZE");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(read_barcode_text(dir / "d.txt").fragment_length(), 23u);
  EXPECT_EQ(cli::default_size(), 32u);
}

TEST(Cli, PhantomAndReconstruct) {
  test::TempDir dir;
  ASSERT_EQ(rbc({"phantom", "shepp-logan", "--size", "64", "--out", (dir / "sl.pgm").string()}).code, 0);
  const GrayImage img = load_image(dir / "sl.pgm");
  EXPECT_EQ(img.width(), 64u);
  const Outcome o = rbc({"reconstruct", (dir / "sl.pgm").string(), "--size", "64", "--out",
                         (dir / "rec.pgm").string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("correlation: 0.9"), std::string::npos) << o.out;
  EXPECT_EQ(load_image(dir / "rec.pgm").width(), 64u);
}

}  // namespace
}  // namespace rbc
