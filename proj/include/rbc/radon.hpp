#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rbc/image.hpp"

namespace rbc {

/// Sorted, duplicate-free, non-empty set of projection angles in degrees,
/// each in [0, 180).
class AngleSet {
public:
  /// Sorts the input; throws on empty input, out-of-range or repeated angles.
  explicit AngleSet(std::vector<double> degrees);
  AngleSet(std::initializer_list<double> degrees)
      : AngleSet(std::vector<double>(degrees)) {}

  std::size_t size() const noexcept { return degrees_.size(); }
  double operator[](std::size_t i) const noexcept { return degrees_[i]; }
  std::span<const double> degrees() const noexcept { return degrees_; }
  auto begin() const noexcept { return degrees_.begin(); }
  auto end() const noexcept { return degrees_.end(); }

  /// Angles rounded to whole degrees, for display only.
  std::vector<long> rounded() const;
  /// "0;11.25;22.5" with shortest round-trip formatting.
  std::string to_string(char separator = ';') const;

  friend bool operator==(const AngleSet&, const AngleSet&) = default;
  friend auto operator<=>(const AngleSet&, const AngleSet&) = default;

private:
  std::vector<double> degrees_;
};

std::ostream& operator<<(std::ostream& os, const AngleSet& angles);

/// {k * 180 / n : k = 0 .. n-1}, for 1 <= n <= 180.
AngleSet equidistant_angles(std::size_t n);

/// Projection length for a side x side image: smallest odd integer >= sqrt(2)*side.
std::size_t bin_length(std::size_t side);

/// Exact cos/sin at multiples of 90 degrees, std::cos/std::sin elsewhere.
struct Direction {
  double cos;
  double sin;
};
Direction direction(double degrees);

/// Parallel-beam line integrals of a square image at one angle.
///
/// Pixel (row, col) sits at x = col - c, y = c - row with c = (side-1)/2, and
/// falls at rho = x cos(theta) + y sin(theta). Its mass is split linearly
/// between the two bins nearest to rho + (L-1)/2, so every projection sums to
/// the image total.
std::vector<double> project(const GrayImage& img, double theta_deg);

class Sinogram {
public:
  Sinogram(AngleSet angles, std::vector<std::vector<double>> rows);

  const AngleSet& angles() const noexcept { return angles_; }
  std::size_t bin_length() const noexcept { return bin_length_; }
  std::size_t size() const noexcept { return rows_.size(); }
  std::span<const double> row(std::size_t i) const noexcept { return rows_[i]; }

private:
  AngleSet angles_;
  std::vector<std::vector<double>> rows_;
  std::size_t bin_length_;
};

Sinogram sinogram(const GrayImage& img, const AngleSet& angles);

/// One line per angle: "<angle>,<bin0>,<bin1>,...".
void write_sinogram_csv(const Sinogram& s, std::ostream& out);

}  // namespace rbc
