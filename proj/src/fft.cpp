#include "ergomix/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "ergomix/errors.hpp"

namespace ergomix {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct RealFft2d::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft2d::RealFft2d(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("FFT size must be even and >= 2");
  const std::size_t real_size = static_cast<std::size_t>(n) * n;
  const std::size_t complex_size = static_cast<std::size_t>(n) * (n / 2 + 1);
  std::vector<double> r(real_size);
  std::vector<std::complex<double>> c(complex_size);
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_2d(n, n, r.data(), cp, flags);
  plans_->inverse = fftw_plan_dft_c2r_2d(n, n, cp, r.data(), flags);
  if (!plans_->forward || !plans_->inverse) throw std::runtime_error("FFTW planning failed");
}

RealFft2d::~RealFft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->inverse);
}

std::vector<std::complex<double>> RealFft2d::forward(const std::vector<double>& grid) const {
  if (grid.size() != static_cast<std::size_t>(n_) * n_) {
    throw InvalidArgument("grid size does not match FFT size");
  }
  std::vector<double> in = grid;  // FFTW may not preserve input in general
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n_) * spectrum_columns());
  fftw_execute_dft_r2c(plans_->forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> RealFft2d::inverse(std::vector<std::complex<double>>& spectrum) const {
  if (spectrum.size() != static_cast<std::size_t>(n_) * spectrum_columns()) {
    throw InvalidArgument("spectrum size does not match FFT size");
  }
  std::vector<double> out(static_cast<std::size_t>(n_) * n_);
  fftw_execute_dft_c2r(plans_->inverse, reinterpret_cast<fftw_complex*>(spectrum.data()),
                       out.data());
  return out;
}

}  // namespace ergomix
