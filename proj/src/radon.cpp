#include "rbc/radon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "format.hpp"

namespace rbc {

AngleSet::AngleSet(std::vector<double> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("AngleSet: empty");
  for (double a : degrees_) {
    if (!std::isfinite(a) || a < 0.0 || a >= 180.0) {
      throw std::invalid_argument("AngleSet: angle outside [0, 180): " + format_double(a));
    }
  }
  std::sort(degrees_.begin(), degrees_.end());
  if (std::adjacent_find(degrees_.begin(), degrees_.end()) != degrees_.end()) {
    throw std::invalid_argument("AngleSet: duplicate angle");
  }
}

std::vector<long> AngleSet::rounded() const {
  std::vector<long> out;
  out.reserve(degrees_.size());
  for (double a : degrees_) out.push_back(std::lround(a));
  return out;
}

std::string AngleSet::to_string(char separator) const {
  std::string out;
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (i) out += separator;
    out += format_double(degrees_[i]);
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const AngleSet& angles) {
  return os << '[' << angles.to_string(',') << ']';
}

AngleSet equidistant_angles(std::size_t n) {
  if (n < 1 || n > 180) throw std::invalid_argument("equidistant_angles: n must be in [1, 180]");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = static_cast<double>(k) * 180.0 / static_cast<double>(n);
  }
  return AngleSet(std::move(out));
}

std::size_t bin_length(std::size_t side) {
  auto len = static_cast<std::size_t>(std::ceil(std::sqrt(2.0) * static_cast<double>(side)));
  if (len % 2 == 0) ++len;
  return len;
}

Direction direction(double degrees) {
  if (degrees == 0.0) return {1.0, 0.0};
  if (degrees == 90.0) return {0.0, 1.0};
  const double rad = degrees * M_PI / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

std::vector<double> project(const GrayImage& img, double theta_deg) {
  if (!img.square()) throw std::invalid_argument("project: image must be square");
  const std::size_t side = img.width();
  const std::size_t len = bin_length(side);
  const double centre = (static_cast<double>(side) - 1.0) / 2.0;
  const double offset = (static_cast<double>(len) - 1.0) / 2.0;
  const Direction d = direction(theta_deg);

  std::vector<double> bins(len, 0.0);
  for (std::size_t r = 0; r < side; ++r) {
    const double y_sin = (centre - static_cast<double>(r)) * d.sin;
    for (std::size_t c = 0; c < side; ++c) {
      const double v = img.at(r, c);
      if (v == 0.0) continue;
      const double t = (static_cast<double>(c) - centre) * d.cos + y_sin + offset;
      const auto lo = static_cast<std::size_t>(std::floor(t));
      const double w = t - static_cast<double>(lo);
      bins[lo] += (1.0 - w) * v;
      if (w > 0.0) bins[lo + 1] += w * v;
    }
  }
  return bins;
}

Sinogram::Sinogram(AngleSet angles, std::vector<std::vector<double>> rows)
    : angles_(std::move(angles)), rows_(std::move(rows)) {
  if (rows_.size() != angles_.size()) {
    throw std::invalid_argument("Sinogram: row count does not match angle count");
  }
  bin_length_ = rows_.front().size();
  for (const auto& r : rows_) {
    if (r.size() != bin_length_) throw std::invalid_argument("Sinogram: ragged rows");
  }
}

Sinogram sinogram(const GrayImage& img, const AngleSet& angles) {
  std::vector<std::vector<double>> rows;
  rows.reserve(angles.size());
  for (double a : angles) rows.push_back(project(img, a));
  return Sinogram(angles, std::move(rows));
}

void write_sinogram_csv(const Sinogram& s, std::ostream& out) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << format_double(s.angles()[i]);
    for (double v : s.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace rbc
