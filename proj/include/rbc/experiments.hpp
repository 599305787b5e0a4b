#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rbc/image.hpp"
#include "rbc/microde.hpp"
#include "rbc/search.hpp"

namespace rbc {

struct ImageEntry {
  std::string id;
  std::string class_name;
  GrayImage image;
};

/// The phantom suite at size x size; each phantom is its own class.
std::vector<ImageEntry> phantom_entries(std::size_t size);

/// Every PNG/PGM/BMP in `dir` (sorted by file name), normalized to
/// size x size. `class_map`, when given, holds `filename,class` lines;
/// unmapped images fall into class "default".
std::vector<ImageEntry> load_image_directory(const std::filesystem::path& dir, std::size_t size,
                                             const std::optional<std::filesystem::path>& class_map = {});

enum class Method { BruteForce4of16, Mde4of180, Mde8of180, Custom };

/// "BF-4/16", "MDE-4/180", "MDE-8/180" or "custom".
std::string method_tag(Method m);

struct RunRecord {
  std::string image_id;
  std::string class_name;
  Method method;
  std::string label;
  std::size_t run;
  std::uint64_t seed;
  SearchResult result;
};

struct ImageSummary {
  std::string image_id;
  std::string class_name;
  Method method;
  std::string label;
  AngleSet best_angles;
  CorrelationScore best_score;
  std::size_t runs;
  std::optional<double> mean;
  std::optional<double> stddev;
  /// Some run produced an undefined correlation (constant image).
  bool degenerate;
};

struct ClassSummary {
  std::string class_name;
  Method method;
  std::string label;
  std::size_t images;
  std::size_t samples;
  std::optional<double> mean;
  std::optional<double> stddev;
};

struct ExperimentReport {
  int series = 0;
  nlohmann::json config;
  std::vector<RunRecord> runs;
  std::vector<ImageSummary> per_image;
  std::vector<ClassSummary> per_class;
  /// Wall-clock seconds per method label; logged, never serialized.
  std::map<std::string, double> seconds;
};

struct ExperimentOptions {
  std::uint64_t master_seed = 42;
  std::size_t runs = 30;
  SearchOptions brute_force;
  unsigned jobs = 1;
};

/// Seed for one stochastic run, from the master seed, image id, method
/// label and run index.
std::uint64_t run_seed(std::uint64_t master, const std::string& image_id,
                       const std::string& label, std::size_t run);

/// Arithmetic mean and sample (n-1) standard deviation; stddev is 0 for a
/// single value. Returns nullopt for an empty input.
struct MeanStd {
  double mean;
  double stddev;
};
std::optional<MeanStd> mean_std(const std::vector<double>& values);

/// Per image: exhaustive 4-of-16 and `opts.runs` micro-DE runs whose
/// genomes decode onto the same 16-angle grid (labelled "MDE-4/16").
ExperimentReport run_series1(const std::vector<ImageEntry>& images, const DEConfig& cfg,
                             const ExperimentOptions& opts = {});

/// Per image: exhaustive 4-of-16, then `opts.runs` micro-DE runs for 4 and
/// for 8 angles over the full half circle.
ExperimentReport run_series2(const std::vector<ImageEntry>& images, const DEConfig& cfg4,
                             const DEConfig& cfg8, const ExperimentOptions& opts = {});

nlohmann::json to_json(const ExperimentReport& report);

/// One row per run: image,class,method,label,run,seed,evaluations,best_score,best_angles.
void write_per_run_csv(const ExperimentReport& report, std::ostream& out);

struct WriteOptions {
  bool svg = false;
};

/// Writes report.json, per_run.csv, fitness_curves/<image>_<label>_<run>.csv
/// and barcodes/<image>_<label>.{pgm,txt} for each image's best angle set.
/// Labels have '/' replaced by "of" in file names.
void write_report(const ExperimentReport& report, const std::vector<ImageEntry>& images,
                  const std::filesystem::path& out_dir, const WriteOptions& opts = {});

}  // namespace rbc
