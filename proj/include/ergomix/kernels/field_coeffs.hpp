#pragma once

namespace ergomix::kernels {

enum class FieldKind : int { zero, constant, steady_shear, alternating_shear, cellular };

/// Plain-data description of a catalog field, shared by every kernel ISA.
struct FieldCoeffs {
  FieldKind kind = FieldKind::zero;
  double amplitude = 0.0;
  double wavenumber = 1.0;
  double phase0 = 0.0;
  double phase1 = 0.0;
  double const_u = 0.0;     // constant kind only
  double const_v = 0.0;
  double grad_scale = 0.0;  // 2*pi*wavenumber*amplitude
};

/// Batch of tangent-cocycle states in SoA layout; all pointers index the same n points.
struct CocycleBatch {
  double* x;
  double* y;
  double* w00;
  double* w01;
  double* w10;
  double* w11;
};

}  // namespace ergomix::kernels
