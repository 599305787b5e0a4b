#include "rbc/image.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace rbc {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width_ == 0 || height_ == 0) {
    throw std::invalid_argument("GrayImage: zero dimension");
  }
  if (pixels_.size() != width_ * height_) {
    throw std::invalid_argument("GrayImage: pixel count does not match width x height");
  }
  for (double v : pixels_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("GrayImage: intensity outside [0, 1]");
    }
  }
}

GrayImage GrayImage::filled(std::size_t width, std::size_t height, double value) {
  return GrayImage(width, height, std::vector<double>(width * height, value));
}

GrayImage GrayImage::transposed() const {
  std::vector<double> out(pixels_.size());
  for (std::size_t r = 0; r < height_; ++r) {
    for (std::size_t c = 0; c < width_; ++c) {
      out[c * height_ + r] = pixels_[r * width_ + c];
    }
  }
  return GrayImage(height_, width_, std::move(out));
}

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct Tap {
  std::size_t index;
  double weight;
};

// Resampling weights for one axis, one tap list per output sample.
std::vector<std::vector<Tap>> axis_taps(std::size_t src, std::size_t dst) {
  std::vector<std::vector<Tap>> taps(dst);
  if (src == dst) {
    for (std::size_t k = 0; k < dst; ++k) taps[k] = {{k, 1.0}};
    return taps;
  }
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  if (dst < src) {
    for (std::size_t k = 0; k < dst; ++k) {
      const double lo = static_cast<double>(k) * scale;
      const double hi = static_cast<double>(k + 1) * scale;
      const auto first = static_cast<std::size_t>(std::floor(lo));
      const auto last = std::min(src, static_cast<std::size_t>(std::ceil(hi)));
      for (std::size_t p = first; p < last; ++p) {
        const double overlap =
            std::min(hi, static_cast<double>(p + 1)) - std::max(lo, static_cast<double>(p));
        if (overlap > 0.0) taps[k].push_back({p, overlap / scale});
      }
    }
    return taps;
  }
  for (std::size_t k = 0; k < dst; ++k) {
    double pos = (static_cast<double>(k) + 0.5) * scale - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
    const auto i0 = static_cast<std::size_t>(std::floor(pos));
    const double w = pos - static_cast<double>(i0);
    if (i0 + 1 < src && w > 0.0) {
      taps[k] = {{i0, 1.0 - w}, {i0 + 1, w}};
    } else {
      taps[k] = {{i0, 1.0}};
    }
  }
  return taps;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext != ".png" && ext != ".pgm" && ext != ".bmp") {
    throw std::runtime_error("unsupported image format: " + path.string());
  }
  if (!std::filesystem::is_regular_file(path)) {
    throw std::runtime_error("cannot read image: " + path.string());
  }
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_GRAYSCALE | cv::IMREAD_ANYDEPTH);
  if (mat.empty()) {
    throw std::runtime_error("cannot decode image: " + path.string());
  }
  if (mat.rows == 0 || mat.cols == 0) {
    throw std::runtime_error("zero-dimension image: " + path.string());
  }
  double full_scale = 0.0;
  switch (mat.depth()) {
    case CV_8U: full_scale = 255.0; break;
    case CV_16U: full_scale = 65535.0; break;
    default: throw std::runtime_error("unsupported sample depth: " + path.string());
  }
  cv::Mat real;
  mat.convertTo(real, CV_64F);
  const auto width = static_cast<std::size_t>(real.cols);
  const auto height = static_cast<std::size_t>(real.rows);
  std::vector<double> pixels(width * height);
  for (std::size_t r = 0; r < height; ++r) {
    const auto* row = real.ptr<double>(static_cast<int>(r));
    std::transform(row, row + width, pixels.begin() + static_cast<std::ptrdiff_t>(r * width),
                   [full_scale](double v) { return v / full_scale; });
  }
  return GrayImage(width, height, std::move(pixels));
}

namespace {

void write_pgm_bytes(const std::vector<unsigned char>& bytes, std::size_t width,
                     std::size_t height, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), bytes.begin(), [](double v) {
    return static_cast<unsigned char>(std::lround(v * 255.0));
  });
  write_pgm_bytes(bytes, img.width(), img.height(), path);
}

void save_pgm_rescaled(std::span<const double> values, std::size_t width, std::size_t height,
                       const std::filesystem::path& path) {
  if (values.size() != width * height || values.empty()) {
    throw std::invalid_argument("save_pgm_rescaled: size mismatch");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double span = *hi - *lo;
  std::vector<unsigned char> bytes(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double unit = span > 0.0 ? (values[i] - *lo) / span : 0.5;
    bytes[i] = static_cast<unsigned char>(std::lround(unit * 255.0));
  }
  write_pgm_bytes(bytes, width, height, path);
}

GrayImage normalize(const GrayImage& img, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("normalize: degenerate target size");
  }
  const auto row_taps = axis_taps(img.height(), rows);
  const auto col_taps = axis_taps(img.width(), cols);

  // Horizontal pass into a height x cols buffer, then vertical.
  std::vector<double> tmp(img.height() * cols);
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (const Tap& t : col_taps[c]) acc += t.weight * img.at(r, t.index);
      tmp[r * cols + c] = acc;
    }
  }
  std::vector<double> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (const Tap& t : row_taps[r]) acc += t.weight * tmp[t.index * cols + c];
      out[r * cols + c] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return GrayImage(cols, rows, std::move(out));
}

PhantomKind parse_phantom_kind(std::string_view name) {
  if (name == "shepp-logan") return PhantomKind::SheppLogan;
  if (name == "disk") return PhantomKind::Disk;
  if (name == "square") return PhantomKind::Square;
  if (name == "gradient") return PhantomKind::Gradient;
  throw std::invalid_argument("unknown phantom: " + std::string(name));
}

std::string_view phantom_name(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::SheppLogan: return "shepp-logan";
    case PhantomKind::Disk: return "disk";
    case PhantomKind::Square: return "square";
    case PhantomKind::Gradient: return "gradient";
  }
  return "unknown";
}

std::vector<PhantomKind> phantom_suite() {
  return {PhantomKind::SheppLogan, PhantomKind::Disk, PhantomKind::Square,
          PhantomKind::Gradient};
}

namespace {

struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double cx;
  double cy;
  double tilt_deg;
};

// Modified Shepp-Logan (Toft), on the [-1, 1]^2 square with y pointing up.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
}};

constexpr int kSupersample = 4;

double shepp_logan_at(double x, double y) {
  double value = 0.0;
  for (const Ellipse& e : kSheppLogan) {
    const double t = e.tilt_deg * M_PI / 180.0;
    const double dx = x - e.cx;
    const double dy = y - e.cy;
    const double u = (dx * std::cos(t) + dy * std::sin(t)) / e.semi_x;
    const double v = (-dx * std::sin(t) + dy * std::cos(t)) / e.semi_y;
    if (u * u + v * v <= 1.0) value += e.intensity;
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

GrayImage make_phantom(PhantomKind kind, std::size_t size) {
  if (size < 2) throw std::invalid_argument("make_phantom: size must be >= 2");
  std::vector<double> px(size * size, 0.0);
  const double n = static_cast<double>(size);
  const double centre = (n - 1.0) / 2.0;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      double& v = px[r * size + c];
      switch (kind) {
        case PhantomKind::SheppLogan: {
          // Area-sampled: mean over a kSupersample^2 grid inside the pixel.
          double acc = 0.0;
          for (int sy = 0; sy < kSupersample; ++sy) {
            for (int sx = 0; sx < kSupersample; ++sx) {
              const double fx = static_cast<double>(c) + (sx + 0.5) / kSupersample;
              const double fy = static_cast<double>(r) + (sy + 0.5) / kSupersample;
              acc += shepp_logan_at(2.0 * fx / n - 1.0, 1.0 - 2.0 * fy / n);
            }
          }
          v = acc / (kSupersample * kSupersample);
          break;
        }
        case PhantomKind::Disk: {
          const double dx = static_cast<double>(c) - centre;
          const double dy = static_cast<double>(r) - centre;
          const double radius = 0.375 * n;
          v = dx * dx + dy * dy <= radius * radius ? 1.0 : 0.0;
          break;
        }
        case PhantomKind::Square: {
          const std::size_t lo = size / 4;
          const std::size_t hi = 3 * size / 4;
          v = (r >= lo && r < hi && c >= lo && c < hi) ? 1.0 : 0.0;
          break;
        }
        case PhantomKind::Gradient:
          v = static_cast<double>(r) / (n - 1.0);
          break;
      }
    }
  }
  return GrayImage(size, size, std::move(px));
}

GrayImage make_phantom(std::string_view kind, std::size_t size) {
  return make_phantom(parse_phantom_kind(kind), size);
}

}  // namespace rbc
