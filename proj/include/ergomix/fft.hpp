#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace ergomix {

/// Real-to-complex 2-D DFT of an n x n row-major grid (FFTW backend).
///
/// The spectrum holds n rows of n/2 + 1 columns; column j is frequency j
/// along the fast (x) axis, row i is frequency i (i > n/2 means i - n)
/// along y. Neither direction is normalised.
class RealFft2d {
 public:
  explicit RealFft2d(int n);
  ~RealFft2d();
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  int size() const { return n_; }
  int spectrum_columns() const { return n_ / 2 + 1; }

  std::vector<std::complex<double>> forward(const std::vector<double>& grid) const;
  /// Destroys `spectrum`.
  std::vector<double> inverse(std::vector<std::complex<double>>& spectrum) const;

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace ergomix
