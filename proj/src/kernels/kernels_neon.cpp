#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/kernels/lanes_neon.hpp"
#include "ergomix/kernels/rk4_body.hpp"

namespace ergomix::kernels {

const KernelTable& neon_kernel_table();

namespace {

using neon::F64x2;

void advect_neon(const FieldCoeffs& f, double t0, double t1, int steps, double* x, double* y,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    F64x2 px = F64x2::load(x + i), py = F64x2::load(y + i);
    rk4_positions<F64x2>(f, t0, t1, steps, px, py);
    px.store(x + i);
    py.store(y + i);
  }
  for (; i < n; ++i) rk4_positions<double>(f, t0, t1, steps, x[i], y[i]);
}

void advect_cocycle_neon(const FieldCoeffs& f, double t0, double t1, int steps,
                         const CocycleBatch& b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    F64x2 px = F64x2::load(b.x + i), py = F64x2::load(b.y + i);
    F64x2 a = F64x2::load(b.w00 + i), bb = F64x2::load(b.w01 + i);
    F64x2 c = F64x2::load(b.w10 + i), d = F64x2::load(b.w11 + i);
    rk4_cocycle<F64x2>(f, t0, t1, steps, px, py, a, bb, c, d);
    px.store(b.x + i);
    py.store(b.y + i);
    a.store(b.w00 + i);
    bb.store(b.w01 + i);
    c.store(b.w10 + i);
    d.store(b.w11 + i);
  }
  for (; i < n; ++i) {
    rk4_cocycle<double>(f, t0, t1, steps, b.x[i], b.y[i], b.w00[i], b.w01[i], b.w10[i],
                        b.w11[i]);
  }
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

const KernelTable& neon_kernel_table() {
  static const KernelTable table{"neon", 2, advect_neon, advect_cocycle_neon, sum_sq_diff_neon};
  return table;
}

}  // namespace ergomix::kernels
