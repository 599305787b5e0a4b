#include "rbc/fitness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rbc {

CorrelationScore CorrelationScore::of(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("CorrelationScore: non-finite value");
  CorrelationScore s;
  s.value_ = std::clamp(value, -1.0, 1.0);
  return s;
}

double CorrelationScore::value() const {
  if (!value_) throw std::logic_error("correlation is undefined (zero variance)");
  return *value_;
}

namespace {

// Standard deviations below this fraction of the signal magnitude are
// treated as zero; they are rounding residue of a constant signal.
constexpr double kFlatTolerance = 1e-12;

bool flat(double sum_sq, std::size_t n, double magnitude) {
  return std::sqrt(sum_sq / static_cast<double>(n)) <= kFlatTolerance * std::max(1.0, magnitude);
}

}  // namespace

CorrelationScore correlation(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) throw std::invalid_argument("correlation: size mismatch");
  if (f.empty()) throw std::invalid_argument("correlation: empty input");
  const std::size_t n = f.size();

  double mean_f = 0.0;
  double mean_g = 0.0;
  double mag_f = 0.0;
  double mag_g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_f += f[i];
    mean_g += g[i];
    mag_f = std::max(mag_f, std::abs(f[i]));
    mag_g = std::max(mag_g, std::abs(g[i]));
  }
  mean_f /= static_cast<double>(n);
  mean_g /= static_cast<double>(n);

  double cross = 0.0;
  double ss_f = 0.0;
  double ss_g = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double df = f[i] - mean_f;
    const double dg = g[i] - mean_g;
    cross += df * dg;
    ss_f += df * df;
    ss_g += dg * dg;
  }
  if (flat(ss_f, n, mag_f) || flat(ss_g, n, mag_g)) return CorrelationScore::undefined();
  return CorrelationScore::of(cross / std::sqrt(ss_f * ss_g));
}

CorrelationScore correlation(const GrayImage& f, const Reconstruction& fhat) {
  if (f.width() != fhat.side() || f.height() != fhat.side()) {
    throw std::invalid_argument("correlation: image and reconstruction differ in size");
  }
  return correlation(f.pixels(), fhat.values());
}

CorrelationScore reconstruction_fitness(const GrayImage& img, const AngleSet& angles) {
  if (!img.square()) throw std::invalid_argument("reconstruction_fitness: image must be square");
  return correlation(img, inverse_radon(sinogram(img, angles), img.width()));
}

}  // namespace rbc
