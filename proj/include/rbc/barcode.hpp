#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbc/image.hpp"
#include "rbc/radon.hpp"

namespace rbc {

using Bits = std::vector<std::uint8_t>;

/// Per-angle bit fragments, stored fragment-major.
class RadonBarcode {
public:
  /// `bits` holds angles.size() fragments of `fragment_length` bits each.
  RadonBarcode(AngleSet angles, std::size_t fragment_length, Bits bits);

  const AngleSet& angles() const noexcept { return angles_; }
  std::size_t fragment_length() const noexcept { return fragment_length_; }
  std::size_t fragment_count() const noexcept { return angles_.size(); }
  std::size_t total_bits() const noexcept { return bits_.size(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<const std::uint8_t> fragment(std::size_t i) const noexcept {
    return std::span<const std::uint8_t>(bits_).subspan(i * fragment_length_, fragment_length_);
  }

  /// "<angles ';'-separated>|<'0'/'1' string>"
  std::string to_text() const;
  static RadonBarcode from_text(std::string_view line);

  friend bool operator==(const RadonBarcode&, const RadonBarcode&) = default;

private:
  AngleSet angles_;
  std::size_t fragment_length_;
  Bits bits_;
};

/// Lower median of the nonzero entries (sorted index (k-1)/2), or 0 when
/// every entry is zero.
double nonzero_median(std::span<const double> p);

/// bit i = p[i] >= T, T = nonzero_median(p). An all-zero input gives all zeros.
Bits binarize_projection(std::span<const double> p);

RadonBarcode generate_barcode(const GrayImage& img, const AngleSet& angles);

/// Throws std::invalid_argument when the barcodes differ in angles or length.
std::size_t hamming_distance(const RadonBarcode& a, const RadonBarcode& b);

/// Writes `<stem>.pgm` (16 px high, one column per bit, 1 = black) and
/// `<stem>.txt` (the text form plus newline). A trailing .pgm or .txt on
/// `stem` is dropped first. Returns the two paths.
struct RenderedBarcode {
  std::filesystem::path stripe;
  std::filesystem::path text;
};
RenderedBarcode render_barcode(const RadonBarcode& b, const std::filesystem::path& stem);

RadonBarcode read_barcode_text(const std::filesystem::path& path);

}  // namespace rbc
