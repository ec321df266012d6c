#pragma once

#include <cmath>

// Scalar "lane" overloads. The templated kernel bodies in rk4_body.hpp are
// written against this small vocabulary; SIMD lane types provide the same
// functions through ADL.
namespace ergomix::kernels {
namespace {  // internal linkage: each ISA translation unit gets its own copy

inline double round_nearest(double v) { return std::nearbyint(v); }
inline double floor_lane(double v) { return std::floor(v); }
inline bool lane_eq(double a, double b) { return a == b; }
inline bool lane_ge(double a, double b) { return a >= b; }
inline double select(bool m, double a, double b) { return m ? a : b; }

}  // namespace
}  // namespace ergomix::kernels
