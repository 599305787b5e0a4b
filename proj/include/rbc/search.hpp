#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "rbc/fitness.hpp"
#include "rbc/image.hpp"
#include "rbc/radon.hpp"

namespace rbc {

/// Scores an angle subset. Must be safe to call concurrently.
using Objective = std::function<CorrelationScore(const AngleSet&)>;

struct HistoryPoint {
  std::size_t evaluation;  // 1-based fitness call index
  CorrelationScore best_so_far;
};

struct SearchResult {
  AngleSet best_angles;
  CorrelationScore best_score;
  std::size_t evaluations = 0;
  std::vector<HistoryPoint> history;
};

/// Raised when a brute-force request would exceed the evaluation budget.
class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SearchOptions {
  std::uint64_t budget_cap = 10'000;
  unsigned jobs = 1;
};

/// Exact binomial coefficient C(m, n). Throws std::invalid_argument if n > m.
boost::multiprecision::cpp_int count_combinations(std::size_t n, std::size_t m);

/// Scores every n-subset of `candidates` in lexicographic order and keeps the
/// first maximum, so ties resolve to the lexicographically smallest subset.
/// Results are identical for every `jobs` value.
SearchResult exhaustive_search(const Objective& objective, std::size_t n,
                               const AngleSet& candidates, const SearchOptions& opts = {});
SearchResult exhaustive_search(const GrayImage& img, std::size_t n, const AngleSet& candidates,
                               const SearchOptions& opts = {});

/// Appends one history point for a new evaluation, carrying the best-so-far.
void record_evaluation(std::vector<HistoryPoint>& history, const CorrelationScore& score);

/// {"best_angles", "best_angles_rounded", "best_score", "evaluations",
/// "history": [{"evaluation", "best_so_far"}]}; undefined scores are null.
nlohmann::json to_json(const SearchResult& result);

/// "evaluation,best_so_far" header then one row per evaluation ("nan" when
/// no defined score has been seen yet).
void write_history_csv(const std::vector<HistoryPoint>& history, std::ostream& out);

}  // namespace rbc
