#include "rbc/barcode.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "format.hpp"

namespace rbc {

RadonBarcode::RadonBarcode(AngleSet angles, std::size_t fragment_length, Bits bits)
    : angles_(std::move(angles)), fragment_length_(fragment_length), bits_(std::move(bits)) {
  if (fragment_length_ == 0) throw std::invalid_argument("RadonBarcode: empty fragments");
  if (bits_.size() != angles_.size() * fragment_length_) {
    throw std::invalid_argument("RadonBarcode: bit count != angles x fragment length");
  }
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("RadonBarcode: bits must be 0 or 1");
  }
}

std::string RadonBarcode::to_text() const {
  std::string out = angles_.to_string(';');
  out += '|';
  out.reserve(out.size() + bits_.size());
  for (auto b : bits_) out += b ? '1' : '0';
  return out;
}

RadonBarcode RadonBarcode::from_text(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  const auto bar = line.find('|');
  if (bar == std::string_view::npos) throw std::invalid_argument("barcode text: missing '|'");

  std::vector<double> angles;
  std::string_view head = line.substr(0, bar);
  while (true) {
    const auto semi = head.find(';');
    angles.push_back(parse_double(head.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    head.remove_prefix(semi + 1);
  }

  const std::string_view tail = line.substr(bar + 1);
  Bits bits;
  bits.reserve(tail.size());
  for (char c : tail) {
    if (c != '0' && c != '1') throw std::invalid_argument("barcode text: bad bit character");
    bits.push_back(c == '1');
  }
  if (bits.empty() || bits.size() % angles.size() != 0) {
    throw std::invalid_argument("barcode text: bit count not a multiple of angle count");
  }
  const std::size_t len = bits.size() / angles.size();
  return RadonBarcode(AngleSet(std::move(angles)), len, std::move(bits));
}

double nonzero_median(std::span<const double> p) {
  std::vector<double> nz;
  std::copy_if(p.begin(), p.end(), std::back_inserter(nz), [](double v) { return v != 0.0; });
  if (nz.empty()) return 0.0;
  const auto mid = nz.begin() + static_cast<std::ptrdiff_t>((nz.size() - 1) / 2);
  std::nth_element(nz.begin(), mid, nz.end());
  return *mid;
}

Bits binarize_projection(std::span<const double> p) {
  Bits out(p.size(), 0);
  const double t = nonzero_median(p);
  if (t == 0.0) return out;
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] >= t;
  return out;
}

RadonBarcode generate_barcode(const GrayImage& img, const AngleSet& angles) {
  const Sinogram s = sinogram(img, angles);
  Bits bits;
  bits.reserve(s.size() * s.bin_length());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Bits frag = binarize_projection(s.row(i));
    bits.insert(bits.end(), frag.begin(), frag.end());
  }
  return RadonBarcode(angles, s.bin_length(), std::move(bits));
}

std::size_t hamming_distance(const RadonBarcode& a, const RadonBarcode& b) {
  if (a.angles() != b.angles() || a.total_bits() != b.total_bits()) {
    throw std::invalid_argument("hamming_distance: barcodes differ in shape or angles");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.total_bits(); ++i) d += a.bits()[i] != b.bits()[i];
  return d;
}

RenderedBarcode render_barcode(const RadonBarcode& b, const std::filesystem::path& stem) {
  std::filesystem::path base = stem;
  if (base.extension() == ".pgm" || base.extension() == ".txt") base.replace_extension();
  RenderedBarcode paths{base, base};
  paths.stripe += ".pgm";
  paths.text += ".txt";

  constexpr std::size_t kStripeHeight = 16;
  {
    std::ofstream out(paths.stripe, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + paths.stripe.string());
    out << "P5\n" << b.total_bits() << ' ' << kStripeHeight << "\n255\n";
    std::string row(b.total_bits(), '\0');
    for (std::size_t i = 0; i < b.total_bits(); ++i) {
      row[i] = static_cast<char>(b.bits()[i] ? 0 : 255);
    }
    for (std::size_t r = 0; r < kStripeHeight; ++r) out.write(row.data(), static_cast<std::streamsize>(row.size()));
    if (!out) throw std::runtime_error("write failed: " + paths.stripe.string());
  }
  {
    std::ofstream out(paths.text);
    if (!out) throw std::runtime_error("cannot open for writing: " + paths.text.string());
    out << b.to_text() << '\n';
    if (!out) throw std::runtime_error("write failed: " + paths.text.string());
  }
  return paths;
}

RadonBarcode read_barcode_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line)) {
    throw std::runtime_error("cannot read barcode: " + path.string());
  }
  return RadonBarcode::from_text(line);
}

}  // namespace rbc
