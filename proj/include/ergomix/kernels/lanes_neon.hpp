#pragma once

#include <arm_neon.h>

// Two double lanes in a NEON register (AArch64).
namespace ergomix::kernels::neon {

struct Mask2 {
  uint64x2_t m;
};

struct F64x2 {
  float64x2_t v;

  F64x2() = default;
  F64x2(float64x2_t r) : v(r) {}
  F64x2(double s) : v(vdupq_n_f64(s)) {}

  static F64x2 load(const double* p) { return vld1q_f64(p); }
  void store(double* p) const { vst1q_f64(p, v); }

  friend F64x2 operator+(F64x2 a, F64x2 b) { return vaddq_f64(a.v, b.v); }
  friend F64x2 operator-(F64x2 a, F64x2 b) { return vsubq_f64(a.v, b.v); }
  friend F64x2 operator*(F64x2 a, F64x2 b) { return vmulq_f64(a.v, b.v); }
};

// vrndnq rounds half to even, matching nearbyint in the default rounding mode.
inline F64x2 round_nearest(F64x2 a) { return vrndnq_f64(a.v); }
inline F64x2 floor_lane(F64x2 a) { return vrndmq_f64(a.v); }
inline Mask2 lane_eq(F64x2 a, F64x2 b) { return {vceqq_f64(a.v, b.v)}; }
inline Mask2 lane_ge(F64x2 a, F64x2 b) { return {vcgeq_f64(a.v, b.v)}; }
inline F64x2 select(Mask2 m, F64x2 a, F64x2 b) { return vbslq_f64(m.m, a.v, b.v); }

}  // namespace ergomix::kernels::neon
