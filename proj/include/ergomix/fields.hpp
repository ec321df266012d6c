#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ergomix/kernels/field_coeffs.hpp"
#include "ergomix/torus.hpp"

namespace ergomix {

using FieldKind = kernels::FieldKind;

/// Catalog entry for a 1-periodic, divergence-free velocity field on T^2.
///
/// Conventions (k = wavenumber, A = amplitude, phases in turns):
///   zero               b = 0
///   constant           b = A (cos 2pi phi0, sin 2pi phi0)
///   steady_shear       b = (A sin 2pi k(y + phi0), 0)
///   alternating_shear  steady_shear on t mod 1 in [0, 1/2),
///                      b = (0, A sin 2pi k(x + phi1)) on [1/2, 1)
///   cellular           b = A (sin X cos Y, -cos X sin Y), X = 2pi k(x + phi0), Y = 2pi k(y + phi1)
struct VelocityFieldSpec {
  FieldKind kind = FieldKind::zero;
  double amplitude = 1.0;
  std::vector<double> phases{0.0, 0.0};
  int wavenumber = 1;

  friend bool operator==(const VelocityFieldSpec&, const VelocityFieldSpec&) = default;
};

struct FieldSample {
  Vec2 velocity;
  Mat2 gradient;  // gradient(i, j) = d b_i / d x_j
};

struct Quadrature {
  int space_points = 256;  // cells per spatial axis
  int time_points = 64;    // cells over one period

  friend bool operator==(const Quadrature&, const Quadrature&) = default;
};

class VelocityField {
 public:
  explicit VelocityField(const VelocityFieldSpec& spec);

  const VelocityFieldSpec& spec() const { return spec_; }
  const kernels::FieldCoeffs& coeffs() const { return coeffs_; }

  /// b(t, x) and grad b(t, x); for the alternating shear the branch is t mod 1 < 1/2.
  FieldSample eval(double t, const TorusPoint& x) const;

  /// Human-readable one-line description used in report metadata.
  std::string describe() const;

 private:
  VelocityFieldSpec spec_;
  kernels::FieldCoeffs coeffs_;
};

VelocityField make_field(const VelocityFieldSpec& spec);

/// Time average over one period of the space integral of |grad b|_op, by
/// composite 2-point Gauss-Legendre on every axis.
double grad_l1_time_average(const VelocityField& field, const Quadrature& quadrature);

std::string_view to_string(FieldKind kind);
FieldKind field_kind_from_string(std::string_view name);

/// Default catalog entries (amplitude 1 except where noted), one per kind.
std::vector<VelocityFieldSpec> default_field_catalog();

}  // namespace ergomix
