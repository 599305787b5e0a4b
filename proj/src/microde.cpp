#include "rbc/microde.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "rbc/seeding.hpp"

namespace rbc {

void DEConfig::validate() const {
  if (population_size < 4) {
    throw std::invalid_argument("DEConfig: population_size must be >= 4 for DE/rand/1");
  }
  if (!(scale_factor > 0.0 && scale_factor <= 2.0)) {
    throw std::invalid_argument("DEConfig: scale_factor must be in (0, 2]");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw std::invalid_argument("DEConfig: crossover_rate must be in [0, 1]");
  }
  if (max_evaluations < population_size) {
    throw std::invalid_argument("DEConfig: max_evaluations must be >= population_size");
  }
  slot_count(quantization_step);
}

DEConfig DEConfig::four_angles() { return DEConfig{}; }

DEConfig DEConfig::eight_angles() {
  DEConfig cfg;
  cfg.population_size = 10;
  cfg.max_evaluations = 400;
  return cfg;
}

nlohmann::json to_json(const DEConfig& cfg) {
  return {
      {"population_size", cfg.population_size},
      {"scale_factor", cfg.scale_factor},
      {"crossover_rate", cfg.crossover_rate},
      {"max_evaluations", cfg.max_evaluations},
      {"seed", cfg.seed},
      {"quantization_step", cfg.quantization_step},
      {"value_to_reach", cfg.value_to_reach ? nlohmann::json(*cfg.value_to_reach) : nullptr},
  };
}

std::size_t slot_count(double step) {
  if (!(step > 0.0) || step > 180.0) {
    throw std::invalid_argument("quantization step must be in (0, 180]");
  }
  const double slots = 180.0 / step;
  const double rounded = std::round(slots);
  if (std::abs(slots - rounded) > 1e-9) {
    throw std::invalid_argument("quantization step must divide 180");
  }
  return static_cast<std::size_t>(rounded);
}

AngleSet decode_genome(std::span<const double> genes, double step) {
  const std::size_t slots = slot_count(step);
  if (genes.empty()) throw std::invalid_argument("decode_genome: empty genome");
  if (genes.size() > slots) {
    throw std::invalid_argument("decode_genome: more genes than quantized angles");
  }
  std::vector<bool> taken(slots, false);
  std::vector<double> angles;
  angles.reserve(genes.size());
  for (double g : genes) {
    auto slot = static_cast<std::size_t>(std::llround(g / step)) % slots;
    while (taken[slot]) slot = (slot + 1) % slots;
    taken[slot] = true;
    angles.push_back(static_cast<double>(slot) * step);
  }
  return AngleSet(std::move(angles));
}

double reflect_degrees(double v) {
  double m = std::fmod(v, 360.0);
  if (m < 0.0) m += 360.0;
  if (m > 180.0) m = 360.0 - m;
  if (m >= 180.0) m = 0.0;
  return m;
}

namespace {

struct Individual {
  std::vector<double> genes;
  AngleSet angles;
  CorrelationScore score;
};

std::vector<std::vector<double>> genomes_of(const std::vector<Individual>& pop) {
  std::vector<std::vector<double>> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(ind.genes);
  return out;
}

std::size_t pick_other(RandomStream& rng, std::size_t np, std::initializer_list<std::size_t> avoid) {
  while (true) {
    const auto r = static_cast<std::size_t>(rng.below(np));
    bool clash = false;
    for (auto a : avoid) clash = clash || r == a;
    if (!clash) return r;
  }
}

}  // namespace

SearchResult mde_optimize(const Objective& objective, std::size_t n, const DEConfig& cfg,
                          const MdeOptions& opts) {
  cfg.validate();
  if (n == 0) throw std::invalid_argument("mde_optimize: n must be >= 1");
  if (n > slot_count(cfg.quantization_step)) {
    throw std::invalid_argument("mde_optimize: n exceeds the number of quantized angles");
  }
  const std::size_t np = cfg.population_size;

  std::vector<HistoryPoint> history;
  history.reserve(cfg.max_evaluations);
  std::size_t evaluations = 0;
  std::optional<Individual> best;
  auto account = [&](const Individual& ind) {
    ++evaluations;
    record_evaluation(history, ind.score);
    if (!best || ind.score.rank() > best->score.rank()) best = ind;
  };
  auto reached = [&] {
    return cfg.value_to_reach && best && best->score.rank() >= *cfg.value_to_reach;
  };

  auto score_all = [&](std::vector<std::vector<double>> genomes) {
    std::vector<Individual> out;
    out.reserve(genomes.size());
    for (auto& g : genomes) {
      AngleSet angles = decode_genome(g, cfg.quantization_step);
      out.push_back({std::move(g), std::move(angles), CorrelationScore::undefined()});
    }
    detail::parallel_for(out.size(), opts.jobs,
                         [&](std::size_t i) { out[i].score = objective(out[i].angles); });
    return out;
  };

  std::vector<std::vector<double>> initial(np, std::vector<double>(n));
  for (std::size_t i = 0; i < np; ++i) {
    RandomStream rng(derive_seed(cfg.seed, {0, i}));
    for (double& g : initial[i]) g = 180.0 * rng.uniform();
  }
  std::vector<Individual> population = score_all(std::move(initial));
  for (const auto& ind : population) account(ind);
  if (opts.observer) opts.observer(0, genomes_of(population));

  for (std::size_t generation = 1; evaluations < cfg.max_evaluations && !reached(); ++generation) {
    const std::size_t count = std::min(np, cfg.max_evaluations - evaluations);
    std::vector<std::vector<double>> trial_genes(count);
    for (std::size_t i = 0; i < count; ++i) {
      RandomStream rng(derive_seed(cfg.seed, {generation, i}));
      const std::size_t r1 = pick_other(rng, np, {i});
      const std::size_t r2 = pick_other(rng, np, {i, r1});
      const std::size_t r3 = pick_other(rng, np, {i, r1, r2});
      const auto forced = static_cast<std::size_t>(rng.below(n));
      const auto& target = population[i].genes;
      std::vector<double>& trial = trial_genes[i];
      trial = target;
      for (std::size_t j = 0; j < n; ++j) {
        if (rng.uniform() < cfg.crossover_rate || j == forced) {
          const double mutant = population[r1].genes[j] +
                                cfg.scale_factor * (population[r2].genes[j] - population[r3].genes[j]);
          trial[j] = reflect_degrees(mutant);
        }
      }
    }
    std::vector<Individual> trials = score_all(std::move(trial_genes));
    for (std::size_t i = 0; i < count; ++i) {
      account(trials[i]);
      if (trials[i].score.rank() >= population[i].score.rank()) {
        population[i] = std::move(trials[i]);
      }
    }
    if (opts.observer) opts.observer(generation, genomes_of(population));
  }

  return SearchResult{best->angles, best->score, evaluations, std::move(history)};
}

SearchResult mde_optimize(const GrayImage& img, std::size_t n, const DEConfig& cfg,
                          const MdeOptions& opts) {
  return mde_optimize([&img](const AngleSet& a) { return reconstruction_fitness(img, a); }, n,
                      cfg, opts);
}

}  // namespace rbc
