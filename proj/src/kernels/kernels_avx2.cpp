#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/kernels/lanes_avx2.hpp"
#include "ergomix/kernels/rk4_body.hpp"

namespace ergomix::kernels {

const KernelTable& avx2_kernel_table();

namespace {

using avx2::F64x4;

void advect_avx2(const FieldCoeffs& f, double t0, double t1, int steps, double* x, double* y,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    F64x4 px = F64x4::load(x + i), py = F64x4::load(y + i);
    rk4_positions<F64x4>(f, t0, t1, steps, px, py);
    px.store(x + i);
    py.store(y + i);
  }
  for (; i < n; ++i) rk4_positions<double>(f, t0, t1, steps, x[i], y[i]);
}

void advect_cocycle_avx2(const FieldCoeffs& f, double t0, double t1, int steps,
                         const CocycleBatch& b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    F64x4 px = F64x4::load(b.x + i), py = F64x4::load(b.y + i);
    F64x4 a = F64x4::load(b.w00 + i), bb = F64x4::load(b.w01 + i);
    F64x4 c = F64x4::load(b.w10 + i), d = F64x4::load(b.w11 + i);
    rk4_cocycle<F64x4>(f, t0, t1, steps, px, py, a, bb, c, d);
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

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", 4, advect_avx2, advect_cocycle_avx2, sum_sq_diff_avx2};
  return table;
}

}  // namespace ergomix::kernels
