#include "ergomix/fields.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "ergomix/errors.hpp"
#include "ergomix/kernels/rk4_body.hpp"
#include "ergomix/parallel.hpp"

namespace ergomix {

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::zero: return "zero";
    case FieldKind::constant: return "constant";
    case FieldKind::steady_shear: return "steady_shear";
    case FieldKind::alternating_shear: return "alternating_shear";
    case FieldKind::cellular: return "cellular";
  }
  return "unknown";
}

FieldKind field_kind_from_string(std::string_view name) {
  for (auto k : {FieldKind::zero, FieldKind::constant, FieldKind::steady_shear,
                 FieldKind::alternating_shear, FieldKind::cellular}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown field kind '" + std::string(name) +
                        "' (expected zero, constant, steady_shear, alternating_shear, cellular)");
}

VelocityField::VelocityField(const VelocityFieldSpec& spec) : spec_(spec) {
  const int kind = static_cast<int>(spec.kind);
  if (kind < 0 || kind > static_cast<int>(FieldKind::cellular)) {
    throw InvalidArgument("unknown field kind");
  }
  if (!std::isfinite(spec.amplitude)) throw InvalidArgument("field amplitude must be finite");
  if (spec.amplitude < 0.0) throw InvalidArgument("field amplitude must be >= 0");
  if (spec.wavenumber < 1) throw InvalidArgument("field wavenumber must be >= 1");
  if (spec.phases.size() > 2) throw InvalidArgument("at most two phases are used on T^2");
  for (double p : spec.phases) {
    if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("field phases must lie in [0, 1)");
  }
  spec_.phases.resize(2, 0.0);

  coeffs_.kind = spec.kind;
  coeffs_.amplitude = spec.amplitude;
  coeffs_.wavenumber = spec.wavenumber;
  coeffs_.phase0 = spec_.phases[0];
  coeffs_.phase1 = spec_.phases[1];
  coeffs_.grad_scale = kernels::kTwoPi * coeffs_.wavenumber * coeffs_.amplitude;
  if (spec.kind == FieldKind::constant) {
    double s = 0.0, c = 0.0;
    kernels::sincos_2pi<double>(coeffs_.phase0, s, c);
    coeffs_.const_u = spec.amplitude * c;
    coeffs_.const_v = spec.amplitude * s;
  }
}

VelocityField make_field(const VelocityFieldSpec& spec) { return VelocityField(spec); }

FieldSample VelocityField::eval(double t, const TorusPoint& x) const {
  FieldSample out;
  kernels::velocity_gradient<double>(coeffs_, kernels::second_half_at(t), x.x(), x.y(),
                                     out.velocity.x, out.velocity.y, out.gradient.a,
                                     out.gradient.b, out.gradient.c, out.gradient.d);
  return out;
}

std::string VelocityField::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(spec_.kind) << "(amplitude=" << spec_.amplitude
     << ", wavenumber=" << spec_.wavenumber << ", phases=" << spec_.phases[0] << ","
     << spec_.phases[1] << ")";
  return os.str();
}

double grad_l1_time_average(const VelocityField& field, const Quadrature& quadrature) {
  if (quadrature.space_points < 16 || quadrature.time_points < 16) {
    throw InvalidArgument("quadrature resolutions must be >= 16 per axis");
  }
  const int ns = quadrature.space_points;
  const int nt = quadrature.time_points;
  // Gauss-Legendre 2-point nodes on a unit cell.
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> nodes{0.5 - g, 0.5 + g};

  std::vector<double> row_sums(static_cast<std::size_t>(nt) * ns, 0.0);
  parallel_for(row_sums.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int it = static_cast<int>(idx / ns);
      const int iy = static_cast<int>(idx % ns);
      double acc = 0.0;
      for (double gt : nodes) {
        const double t = (it + gt) / nt;
        for (double gy : nodes) {
          const double y = (iy + gy) / ns;
          for (int ix = 0; ix < ns; ++ix) {
            for (double gx : nodes) {
              const double x = (ix + gx) / ns;
              acc += operator_norm(field.eval(t, TorusPoint(x, y)).gradient);
            }
          }
        }
      }
      row_sums[idx] = acc;
    }
  });
  double total = 0.0;
  for (double r : row_sums) total += r;
  return total / (8.0 * static_cast<double>(nt) * ns * ns);
}

std::vector<VelocityFieldSpec> default_field_catalog() {
  return {
      {FieldKind::zero, 0.0, {0.0, 0.0}, 1},
      {FieldKind::constant, 0.5, {0.0, 0.0}, 1},
      {FieldKind::steady_shear, 1.0, {0.0, 0.0}, 1},
      {FieldKind::alternating_shear, 1.0, {0.0, 0.0}, 1},
      {FieldKind::cellular, 1.0, {0.0, 0.0}, 1},
  };
}

}  // namespace ergomix
