#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/kernels/rk4_body.hpp"

namespace ergomix::kernels {
namespace {

void advect_scalar(const FieldCoeffs& f, double t0, double t1, int steps, double* x, double* y,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) rk4_positions<double>(f, t0, t1, steps, x[i], y[i]);
}

void advect_cocycle_scalar(const FieldCoeffs& f, double t0, double t1, int steps,
                           const CocycleBatch& b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    rk4_cocycle<double>(f, t0, t1, steps, b.x[i], b.y[i], b.w00[i], b.w01[i], b.w10[i],
                        b.w11[i]);
  }
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", 1, advect_scalar, advect_cocycle_scalar,
                                 sum_sq_diff_scalar};
  return table;
}

}  // namespace ergomix::kernels
