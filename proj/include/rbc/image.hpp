#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rbc {

/// Row-major grayscale image with intensities in [0, 1].
///
/// Immutable after construction; the constructor validates the size and the
/// intensity range so every GrayImage in the program satisfies both.
class GrayImage {
public:
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  /// Constant image.
  static GrayImage filled(std::size_t width, std::size_t height, double value);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool square() const noexcept { return width_ == height_; }

  double at(std::size_t row, std::size_t col) const noexcept {
    return pixels_[row * width_ + col];
  }
  std::span<const double> pixels() const noexcept { return pixels_; }

  GrayImage transposed() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

/// Reads PNG, PGM or BMP. Color inputs are converted to luminance and 8-bit
/// samples are divided by 255.
GrayImage load_image(const std::filesystem::path& path);

/// Binary PGM (P5, maxval 255); intensities are rounded to the nearest level.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Writes arbitrary real values as a PGM after an affine rescale of
/// [min, max] to [0, 255]. A constant input is written as mid-gray.
void save_pgm_rescaled(std::span<const double> values, std::size_t width,
                       std::size_t height, const std::filesystem::path& path);

/// Resamples to rows x cols. Each axis is area-averaged when shrinking and
/// bilinearly interpolated when growing; an unchanged axis is copied.
GrayImage normalize(const GrayImage& img, std::size_t rows, std::size_t cols);

enum class PhantomKind { SheppLogan, Disk, Square, Gradient };

PhantomKind parse_phantom_kind(std::string_view name);
std::string_view phantom_name(PhantomKind kind);

/// Deterministic synthetic test image of size x size pixels.
///
///  - shepp-logan: modified (high-contrast) Shepp-Logan head, max intensity 1,
///    each pixel the mean of a 4x4 grid of point samples.
///  - disk: 1 inside a centred disk of radius 0.375*size, 0 elsewhere.
///  - square: 1 on the centred square [size/4, 3*size/4), 0 elsewhere.
///  - gradient: row k has constant value k / (size - 1).
GrayImage make_phantom(PhantomKind kind, std::size_t size);
GrayImage make_phantom(std::string_view kind, std::size_t size);

/// The built-in phantom suite, in a fixed order.
std::vector<PhantomKind> phantom_suite();

}  // namespace rbc
