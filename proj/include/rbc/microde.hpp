#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "rbc/image.hpp"
#include "rbc/radon.hpp"
#include "rbc/search.hpp"

namespace rbc {

struct DEConfig {
  std::size_t population_size = 6;
  double scale_factor = 0.5;
  double crossover_rate = 0.9;
  std::size_t max_evaluations = 300;
  std::uint64_t seed = 0;
  /// Genes decode to multiples of this step; 180 / step must be an integer.
  double quantization_step = 10.0;
  /// Stop once the best score reaches this value (checked per generation).
  std::optional<double> value_to_reach;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;

  /// Np = 6, NFC = 300: the 4-of-180 setting.
  static DEConfig four_angles();
  /// Np = 10, NFC = 400: the 8-of-180 setting.
  static DEConfig eight_angles();
};

nlohmann::json to_json(const DEConfig& cfg);

/// Number of quantized angle slots in [0, 180) for `step`.
std::size_t slot_count(double step);

/// Maps each gene to the nearest multiple of `step` (mod 180). A gene whose
/// slot is taken moves to the next free slot upward, wrapping at 180. Genes
/// are placed in input order; the result is sorted.
AngleSet decode_genome(std::span<const double> genes, double step);

/// Mirrors a value into [0, 180) with period 360; exactly 180 maps to 0.
double reflect_degrees(double v);

struct MdeOptions {
  unsigned jobs = 1;
  /// Called with the population genomes after initialisation (generation 0)
  /// and after each generation's selection.
  std::function<void(std::size_t generation, const std::vector<std::vector<double>>& genomes)>
      observer;
};

/// DE/rand/1 with binomial crossover and one-to-one selection over
/// continuous genomes in [0, 180)^n, decoded by decode_genome.
///
/// The initial population is scored first; each later generation builds one
/// trial per target from the previous population, scores the trials, and
/// keeps a trial when it is at least as good as its target. The last
/// generation is truncated so the call count never exceeds max_evaluations.
/// Every random draw comes from a stream seeded by (seed, generation, index),
/// so the result does not depend on `jobs`.
SearchResult mde_optimize(const Objective& objective, std::size_t n, const DEConfig& cfg,
                          const MdeOptions& opts = {});
SearchResult mde_optimize(const GrayImage& img, std::size_t n, const DEConfig& cfg,
                          const MdeOptions& opts = {});

}  // namespace rbc
