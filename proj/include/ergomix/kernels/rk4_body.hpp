#pragma once

#include <cmath>

#include "ergomix/kernels/field_coeffs.hpp"
#include "ergomix/kernels/lanes_scalar.hpp"

// Kernel bodies templated on the lane type V (double, or a SIMD wrapper with
// the same operator set). Every ISA instantiates the same sequence of IEEE
// operations, so results agree bit for bit across ISAs as long as the
// compiler does not contract multiply-adds (-ffp-contract=off).
namespace ergomix::kernels {
namespace {  // internal linkage: each ISA translation unit gets its own copy

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// sin(2*pi*u) and cos(2*pi*u). Reduction is done in turns, which is exact:
/// r = u - round(u) in [-1/2, 1/2], q = round(4r), f = r - q/4 in [-1/8, 1/8].
template <class V>
inline void sincos_2pi(V u, V& s, V& c) {
  const V r = u - round_nearest(u);
  const V q = round_nearest(r * V(4.0));
  const V f = r - q * V(0.25);
  const V th = f * V(kTwoPi);
  const V t2 = th * th;
  // Taylor series on |th| <= pi/4; truncation below 5e-17.
  V sp = V(1.0 / 1307674368000.0);
  sp = sp * t2 - V(1.0 / 6227020800.0);
  sp = sp * t2 + V(1.0 / 39916800.0);
  sp = sp * t2 - V(1.0 / 362880.0);
  sp = sp * t2 + V(1.0 / 5040.0);
  sp = sp * t2 - V(1.0 / 120.0);
  sp = sp * t2 + V(1.0 / 6.0);
  sp = th - th * t2 * sp;
  V cp = V(1.0 / 20922789888000.0);
  cp = cp * t2 - V(1.0 / 87178291200.0);
  cp = cp * t2 + V(1.0 / 479001600.0);
  cp = cp * t2 - V(1.0 / 3628800.0);
  cp = cp * t2 + V(1.0 / 40320.0);
  cp = cp * t2 - V(1.0 / 720.0);
  cp = cp * t2 + V(1.0 / 24.0);
  cp = cp * t2 - V(0.5);
  cp = V(1.0) + t2 * cp;
  // quadrant q in {-2,-1,0,1,2}; q = +-2 are the same half-turn.
  const auto q1 = lane_eq(q, V(1.0));
  const auto qm1 = lane_eq(q, V(-1.0));
  const auto q2 = lane_eq(q * q, V(4.0));
  const V zero(0.0);
  V ss = select(q1, cp, select(qm1, zero - cp, select(q2, zero - sp, sp)));
  V cc = select(q1, zero - sp, select(qm1, sp, select(q2, zero - cp, cp)));
  s = ss;
  c = cc;
}

template <class V>
inline V wrap_lane(V v) {
  const V r = v - floor_lane(v);
  return select(lane_ge(r, V(1.0)), r - V(1.0), r);
}

/// Whether the half-period branch of an alternating field is the second one.
inline bool second_half_at(double t) { return t - std::floor(t) >= 0.5; }

template <class V>
inline void velocity(const FieldCoeffs& f, bool second_half, V x, V y, V& u, V& v) {
  switch (f.kind) {
    case FieldKind::zero:
    default:
      u = V(0.0);
      v = V(0.0);
      return;
    case FieldKind::constant:
      u = V(f.const_u);
      v = V(f.const_v);
      return;
    case FieldKind::steady_shear: {
      V s, c;
      sincos_2pi(V(f.wavenumber) * (y + V(f.phase0)), s, c);
      u = V(f.amplitude) * s;
      v = V(0.0);
      return;
    }
    case FieldKind::alternating_shear: {
      V s, c;
      if (!second_half) {
        sincos_2pi(V(f.wavenumber) * (y + V(f.phase0)), s, c);
        u = V(f.amplitude) * s;
        v = V(0.0);
      } else {
        sincos_2pi(V(f.wavenumber) * (x + V(f.phase1)), s, c);
        u = V(0.0);
        v = V(f.amplitude) * s;
      }
      return;
    }
    case FieldKind::cellular: {
      V sx, cx, sy, cy;
      sincos_2pi(V(f.wavenumber) * (x + V(f.phase0)), sx, cx);
      sincos_2pi(V(f.wavenumber) * (y + V(f.phase1)), sy, cy);
      u = V(f.amplitude) * (sx * cy);
      v = V(0.0) - V(f.amplitude) * (cx * sy);
      return;
    }
  }
}

/// Velocity and gradient g = [[g00, g01], [g10, g11]], g_ij = d b_i / d x_j.
/// The velocity part repeats velocity() operation for operation.
template <class V>
inline void velocity_gradient(const FieldCoeffs& f, bool second_half, V x, V y, V& u, V& v,
                              V& g00, V& g01, V& g10, V& g11) {
  const V zero(0.0);
  switch (f.kind) {
    case FieldKind::zero:
    case FieldKind::constant:
    default:
      velocity(f, second_half, x, y, u, v);
      g00 = g01 = g10 = g11 = zero;
      return;
    case FieldKind::steady_shear: {
      V s, c;
      sincos_2pi(V(f.wavenumber) * (y + V(f.phase0)), s, c);
      u = V(f.amplitude) * s;
      v = zero;
      g00 = g10 = g11 = zero;
      g01 = V(f.grad_scale) * c;
      return;
    }
    case FieldKind::alternating_shear: {
      V s, c;
      if (!second_half) {
        sincos_2pi(V(f.wavenumber) * (y + V(f.phase0)), s, c);
        u = V(f.amplitude) * s;
        v = zero;
        g00 = g10 = g11 = zero;
        g01 = V(f.grad_scale) * c;
      } else {
        sincos_2pi(V(f.wavenumber) * (x + V(f.phase1)), s, c);
        u = zero;
        v = V(f.amplitude) * s;
        g00 = g01 = g11 = zero;
        g10 = V(f.grad_scale) * c;
      }
      return;
    }
    case FieldKind::cellular: {
      V sx, cx, sy, cy;
      sincos_2pi(V(f.wavenumber) * (x + V(f.phase0)), sx, cx);
      sincos_2pi(V(f.wavenumber) * (y + V(f.phase1)), sy, cy);
      u = V(f.amplitude) * (sx * cy);
      v = zero - V(f.amplitude) * (cx * sy);
      const V diag = V(f.grad_scale) * (cx * cy);
      const V off = V(f.grad_scale) * (sx * sy);
      g00 = diag;
      g01 = zero - off;
      g10 = off;
      g11 = zero - diag;
      return;
    }
  }
}

/// Fixed-step classical RK4 for dX/dt = b(t, X), positions wrapped after each step.
template <class V>
inline void rk4_positions(const FieldCoeffs& f, double t0, double t1, int steps, V& x, V& y) {
  const double h = (t1 - t0) / steps;
  const V half_h(0.5 * h), full_h(h), sixth_h(h / 6.0), two(2.0);
  for (int s = 0; s < steps; ++s) {
    const bool second = second_half_at(t0 + (s + 0.5) * h);
    V k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    velocity(f, second, x, y, k1u, k1v);
    velocity(f, second, x + half_h * k1u, y + half_h * k1v, k2u, k2v);
    velocity(f, second, x + half_h * k2u, y + half_h * k2v, k3u, k3v);
    velocity(f, second, x + full_h * k3u, y + full_h * k3v, k4u, k4v);
    x = wrap_lane(x + sixth_h * (k1u + two * k2u + two * k3u + k4u));
    y = wrap_lane(y + sixth_h * (k1v + two * k2v + two * k3v + k4v));
  }
}

/// RK4 for the joint system X' = b(t, X), W' = grad b(t, X) W. Position
/// stages are identical to rk4_positions. W lives on the universal cover.
template <class V>
inline void rk4_cocycle(const FieldCoeffs& f, double t0, double t1, int steps, V& x, V& y,
                        V& w00, V& w01, V& w10, V& w11) {
  const double h = (t1 - t0) / steps;
  const V half_h(0.5 * h), full_h(h), sixth_h(h / 6.0), two(2.0);
  for (int s = 0; s < steps; ++s) {
    const bool second = second_half_at(t0 + (s + 0.5) * h);
    V u1, v1, u2, v2, u3, v3, u4, v4;
    V a, b, c, d;

    velocity_gradient(f, second, x, y, u1, v1, a, b, c, d);
    const V k1_00 = a * w00 + b * w10, k1_01 = a * w01 + b * w11;
    const V k1_10 = c * w00 + d * w10, k1_11 = c * w01 + d * w11;

    velocity_gradient(f, second, x + half_h * u1, y + half_h * v1, u2, v2, a, b, c, d);
    V m00 = w00 + half_h * k1_00, m01 = w01 + half_h * k1_01;
    V m10 = w10 + half_h * k1_10, m11 = w11 + half_h * k1_11;
    const V k2_00 = a * m00 + b * m10, k2_01 = a * m01 + b * m11;
    const V k2_10 = c * m00 + d * m10, k2_11 = c * m01 + d * m11;

    velocity_gradient(f, second, x + half_h * u2, y + half_h * v2, u3, v3, a, b, c, d);
    m00 = w00 + half_h * k2_00;
    m01 = w01 + half_h * k2_01;
    m10 = w10 + half_h * k2_10;
    m11 = w11 + half_h * k2_11;
    const V k3_00 = a * m00 + b * m10, k3_01 = a * m01 + b * m11;
    const V k3_10 = c * m00 + d * m10, k3_11 = c * m01 + d * m11;

    velocity_gradient(f, second, x + full_h * u3, y + full_h * v3, u4, v4, a, b, c, d);
    m00 = w00 + full_h * k3_00;
    m01 = w01 + full_h * k3_01;
    m10 = w10 + full_h * k3_10;
    m11 = w11 + full_h * k3_11;
    const V k4_00 = a * m00 + b * m10, k4_01 = a * m01 + b * m11;
    const V k4_10 = c * m00 + d * m10, k4_11 = c * m01 + d * m11;

    x = wrap_lane(x + sixth_h * (u1 + two * u2 + two * u3 + u4));
    y = wrap_lane(y + sixth_h * (v1 + two * v2 + two * v3 + v4));
    w00 = w00 + sixth_h * (k1_00 + two * k2_00 + two * k3_00 + k4_00);
    w01 = w01 + sixth_h * (k1_01 + two * k2_01 + two * k3_01 + k4_01);
    w10 = w10 + sixth_h * (k1_10 + two * k2_10 + two * k3_10 + k4_10);
    w11 = w11 + sixth_h * (k1_11 + two * k2_11 + two * k3_11 + k4_11);
  }
}

}  // namespace
}  // namespace ergomix::kernels
