#pragma once

#include <immintrin.h>

// Four double lanes in an AVX register. Include only from TUs compiled with -mavx2.
namespace ergomix::kernels::avx2 {

struct Mask4 {
  __m256d m;
};

struct F64x4 {
  __m256d v;

  F64x4() = default;
  F64x4(__m256d r) : v(r) {}
  F64x4(double s) : v(_mm256_set1_pd(s)) {}

  static F64x4 load(const double* p) { return _mm256_loadu_pd(p); }
  void store(double* p) const { _mm256_storeu_pd(p, v); }

  friend F64x4 operator+(F64x4 a, F64x4 b) { return _mm256_add_pd(a.v, b.v); }
  friend F64x4 operator-(F64x4 a, F64x4 b) { return _mm256_sub_pd(a.v, b.v); }
  friend F64x4 operator*(F64x4 a, F64x4 b) { return _mm256_mul_pd(a.v, b.v); }
};

inline F64x4 round_nearest(F64x4 a) {
  return _mm256_round_pd(a.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
}
inline F64x4 floor_lane(F64x4 a) { return _mm256_floor_pd(a.v); }
inline Mask4 lane_eq(F64x4 a, F64x4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ)}; }
inline Mask4 lane_ge(F64x4 a, F64x4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ)}; }
inline F64x4 select(Mask4 m, F64x4 a, F64x4 b) { return _mm256_blendv_pd(b.v, a.v, m.m); }

}  // namespace ergomix::kernels::avx2
