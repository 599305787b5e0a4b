#include "rbc/search.hpp"

#include <ostream>

#include "format.hpp"
#include "parallel.hpp"

namespace rbc {

boost::multiprecision::cpp_int count_combinations(std::size_t n, std::size_t m) {
  if (n > m) throw std::invalid_argument("count_combinations: n > m");
  const std::size_t k = std::min(n, m - n);
  boost::multiprecision::cpp_int result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // Each partial product is C(m - k + i, i), so the division is exact.
    result *= m - k + i;
    result /= i;
  }
  return result;
}

void record_evaluation(std::vector<HistoryPoint>& history, const CorrelationScore& score) {
  CorrelationScore best = score;
  if (!history.empty() && history.back().best_so_far.rank() >= score.rank()) {
    best = history.back().best_so_far;
  }
  history.push_back({history.size() + 1, best});
}

namespace {

std::vector<AngleSet> lexicographic_subsets(std::size_t n, const AngleSet& candidates) {
  const std::size_t m = candidates.size();
  std::vector<AngleSet> out;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  while (true) {
    std::vector<double> pick(n);
    for (std::size_t i = 0; i < n; ++i) pick[i] = candidates[idx[i]];
    out.emplace_back(std::move(pick));

    std::size_t i = n;
    while (i > 0 && idx[i - 1] == m - n + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

SearchResult exhaustive_search(const Objective& objective, std::size_t n,
                               const AngleSet& candidates, const SearchOptions& opts) {
  if (n == 0 || n > candidates.size()) {
    throw std::invalid_argument("exhaustive_search: need 1 <= n <= candidate count");
  }
  const auto total = count_combinations(n, candidates.size());
  if (total > opts.budget_cap) {
    throw BudgetExceeded("exhaustive search over C(" + std::to_string(candidates.size()) + ", " +
                         std::to_string(n) + ") = " + total.str() +
                         " subsets exceeds the budget cap of " +
                         std::to_string(opts.budget_cap) + " evaluations");
  }

  const std::vector<AngleSet> subsets = lexicographic_subsets(n, candidates);
  std::vector<CorrelationScore> scores(subsets.size(), CorrelationScore::undefined());
  detail::parallel_for(subsets.size(), opts.jobs,
                       [&](std::size_t i) { scores[i] = objective(subsets[i]); });

  std::size_t best = 0;
  std::vector<HistoryPoint> history;
  history.reserve(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (scores[i].rank() > scores[best].rank()) best = i;
    record_evaluation(history, scores[i]);
  }
  return SearchResult{subsets[best], scores[best], subsets.size(), std::move(history)};
}

SearchResult exhaustive_search(const GrayImage& img, std::size_t n, const AngleSet& candidates,
                               const SearchOptions& opts) {
  return exhaustive_search([&img](const AngleSet& a) { return reconstruction_fitness(img, a); },
                           n, candidates, opts);
}

namespace {

nlohmann::json score_json(const CorrelationScore& s) {
  return s.defined() ? nlohmann::json(s.value()) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const SearchResult& result) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : result.history) {
    history.push_back({{"evaluation", h.evaluation}, {"best_so_far", score_json(h.best_so_far)}});
  }
  return {
      {"best_angles", std::vector<double>(result.best_angles.begin(), result.best_angles.end())},
      {"best_angles_rounded", result.best_angles.rounded()},
      {"best_score", score_json(result.best_score)},
      {"evaluations", result.evaluations},
      {"history", std::move(history)},
  };
}

void write_history_csv(const std::vector<HistoryPoint>& history, std::ostream& out) {
  out << "evaluation,best_so_far\n";
  for (const auto& h : history) {
    out << h.evaluation << ','
        << (h.best_so_far.defined() ? format_double(h.best_so_far.value()) : "nan") << '\n';
  }
}

}  // namespace rbc
