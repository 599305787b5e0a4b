#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbc/radon.hpp"

namespace rbc {

/// Unclamped side x side real image produced by back-projection.
class Reconstruction {
public:
  Reconstruction(std::size_t side, std::vector<double> values);

  std::size_t side() const noexcept { return side_; }
  std::span<const double> values() const noexcept { return values_; }
  double at(std::size_t row, std::size_t col) const noexcept {
    return values_[row * side_ + col];
  }

  friend bool operator==(const Reconstruction&, const Reconstruction&) = default;

private:
  std::size_t side_;
  std::vector<double> values_;
};

/// Ram-Lak filtered copy of one projection row. The row is zero-padded to
/// the next power of two >= 2L and filtered in the frequency domain with the
/// transform of the discrete ramp kernel (1/4 at 0, -1/(pi n)^2 at odd n).
std::vector<double> ramp_filter(std::span<const double> row);

/// Filtered back-projection of `s` onto a side x side grid, using the same
/// pixel geometry as project(). Each pixel samples every filtered row by
/// linear interpolation at its rho; the sum is weighted by pi / angle count.
Reconstruction inverse_radon(const Sinogram& s, std::size_t side);

}  // namespace rbc
