#pragma once

#include <limits>
#include <optional>
#include <span>

#include "rbc/image.hpp"
#include "rbc/radon.hpp"
#include "rbc/reconstruct.hpp"

namespace rbc {

/// Pearson correlation in [-1, 1], or undefined when either input has zero
/// variance. An undefined score has no numeric value; for ranking it sorts
/// below every defined score.
class CorrelationScore {
public:
  static CorrelationScore undefined() noexcept { return CorrelationScore(); }
  /// Clamps to [-1, 1].
  static CorrelationScore of(double value);

  bool defined() const noexcept { return value_.has_value(); }
  /// Throws std::logic_error when undefined.
  double value() const;
  /// value(), or -infinity when undefined.
  double rank() const noexcept {
    return value_.value_or(-std::numeric_limits<double>::infinity());
  }
  const std::optional<double>& optional() const noexcept { return value_; }

  friend bool operator==(const CorrelationScore&, const CorrelationScore&) = default;

private:
  CorrelationScore() = default;
  std::optional<double> value_;
};

/// Throws std::invalid_argument on length mismatch or empty input.
CorrelationScore correlation(std::span<const double> f, std::span<const double> g);
CorrelationScore correlation(const GrayImage& f, const Reconstruction& fhat);

/// Correlation between `img` and its filtered back-projection from `angles`.
/// This is the objective both angle searches maximize.
CorrelationScore reconstruction_fitness(const GrayImage& img, const AngleSet& angles);

}  // namespace rbc
