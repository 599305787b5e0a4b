#include "rbc/reconstruct.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace rbc {

Reconstruction::Reconstruction(std::size_t side, std::vector<double> values)
    : side_(side), values_(std::move(values)) {
  if (side_ == 0 || values_.size() != side_ * side_) {
    throw std::invalid_argument("Reconstruction: values must be side x side");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Reconstruction: non-finite value");
  }
}

namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

// Plans and ramp response for one padded length. Planning is not
// thread-safe in FFTW, so filters are created under a global lock; executing
// a plan on fresh buffers with the new-array interface is.
class RampFilter {
public:
  explicit RampFilter(std::size_t padded) : padded_(padded) {
    RealBuffer in(fftw_alloc_real(padded_));
    ComplexBuffer spec(fftw_alloc_complex(bins()));
    const int n = static_cast<int>(padded_);
    forward_ = fftw_plan_dft_r2c_1d(n, in.get(), spec.get(), FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_1d(n, spec.get(), in.get(), FFTW_ESTIMATE);

    std::fill(in.get(), in.get() + padded_, 0.0);
    in[0] = 0.25;
    for (std::size_t k = 1; k <= padded_ / 2; k += 2) {
      const double v = -1.0 / (M_PI * M_PI * static_cast<double>(k * k));
      in[k] = v;
      in[padded_ - k] = v;
    }
    fftw_execute_dft_r2c(forward_, in.get(), spec.get());
    response_.resize(bins());
    for (std::size_t k = 0; k < bins(); ++k) response_[k] = spec[k][0];
  }
  ~RampFilter() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RampFilter(const RampFilter&) = delete;
  RampFilter& operator=(const RampFilter&) = delete;

  std::vector<double> apply(std::span<const double> row) const {
    RealBuffer buf(fftw_alloc_real(padded_));
    ComplexBuffer spec(fftw_alloc_complex(bins()));
    std::fill(buf.get(), buf.get() + padded_, 0.0);
    std::copy(row.begin(), row.end(), buf.get());
    fftw_execute_dft_r2c(forward_, buf.get(), spec.get());
    for (std::size_t k = 0; k < bins(); ++k) {
      spec[k][0] *= response_[k];
      spec[k][1] *= response_[k];
    }
    fftw_execute_dft_c2r(inverse_, spec.get(), buf.get());
    const double scale = 1.0 / static_cast<double>(padded_);
    std::vector<double> out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) out[i] = buf[i] * scale;
    return out;
  }

private:
  std::size_t bins() const noexcept { return padded_ / 2 + 1; }

  std::size_t padded_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
  std::vector<double> response_;
};

const RampFilter& filter_for(std::size_t padded) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<RampFilter>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[padded];
  if (!slot) slot = std::make_unique<RampFilter>(padded);
  return *slot;
}

}  // namespace

std::vector<double> ramp_filter(std::span<const double> row) {
  if (row.empty()) throw std::invalid_argument("ramp_filter: empty row");
  const std::size_t padded = std::bit_ceil(std::max<std::size_t>(2 * row.size(), 2));
  return filter_for(padded).apply(row);
}

Reconstruction inverse_radon(const Sinogram& s, std::size_t side) {
  if (s.size() == 0) throw std::invalid_argument("inverse_radon: empty sinogram");
  if (side == 0 || bin_length(side) != s.bin_length()) {
    throw std::invalid_argument("inverse_radon: sinogram does not match image side");
  }
  const double centre = (static_cast<double>(side) - 1.0) / 2.0;
  const double offset = (static_cast<double>(s.bin_length()) - 1.0) / 2.0;

  std::vector<double> acc(side * side, 0.0);
  for (std::size_t a = 0; a < s.size(); ++a) {
    const std::vector<double> q = ramp_filter(s.row(a));
    const Direction d = direction(s.angles()[a]);
    for (std::size_t r = 0; r < side; ++r) {
      const double y_sin = (centre - static_cast<double>(r)) * d.sin;
      for (std::size_t c = 0; c < side; ++c) {
        const double t = (static_cast<double>(c) - centre) * d.cos + y_sin + offset;
        const auto lo = static_cast<std::size_t>(std::floor(t));
        const double w = t - static_cast<double>(lo);
        double v = (1.0 - w) * q[lo];
        if (w > 0.0) v += w * q[lo + 1];
        acc[r * side + c] += v;
      }
    }
  }
  const double weight = M_PI / static_cast<double>(s.size());
  for (double& v : acc) v *= weight;
  return Reconstruction(side, std::move(acc));
}

}  // namespace rbc
