#include "ergomix/maps.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "ergomix/errors.hpp"
#include "ergomix/flow.hpp"
#include "ergomix/rng.hpp"

namespace ergomix {
namespace {

const Mat2 kCatMatrix{2.0, 1.0, 1.0, 1.0};
const Mat2 kBakerJacobian{2.0, 0.0, 0.0, 0.5};

void require_off_baker_line(double coord, const char* what) {
  if (coord == 0.5) {
    throw SingularInputError(std::string("baker's map is singular on the line ") + what +
                             " = 1/2");
  }
}

TorusPoint baker_apply(const TorusPoint& p) {
  require_off_baker_line(p.x(), "x1");
  if (p.x() < 0.5) return TorusPoint(2.0 * p.x(), 0.5 * p.y());
  return TorusPoint(2.0 * p.x() - 1.0, 0.5 * (p.y() + 1.0));
}

TorusPoint baker_inverse(const TorusPoint& p) {
  require_off_baker_line(p.y(), "x2");
  if (p.y() < 0.5) return TorusPoint(0.5 * p.x(), 2.0 * p.y());
  return TorusPoint(0.5 * (p.x() + 1.0), 2.0 * p.y() - 1.0);
}

}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::cat: return "cat";
    case MapKind::baker: return "baker";
    case MapKind::time_one_flow: return "time_one_flow";
  }
  return "unknown";
}

MapKind map_kind_from_string(std::string_view name) {
  for (auto k : {MapKind::cat, MapKind::baker, MapKind::time_one_flow}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown map kind '" + std::string(name) +
                        "' (expected cat, baker, time_one_flow)");
}

MeasurePreservingMap MeasurePreservingMap::cat() { return {MapKind::cat, std::nullopt, 0}; }

MeasurePreservingMap MeasurePreservingMap::baker() { return {MapKind::baker, std::nullopt, 0}; }

MeasurePreservingMap MeasurePreservingMap::time_one_flow(const VelocityField& field, int steps) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  return {MapKind::time_one_flow, field, steps};
}

std::string MeasurePreservingMap::describe() const {
  if (kind_ == MapKind::time_one_flow) {
    return "time_one_flow[" + field_->describe() + ", steps=" + std::to_string(steps_) + "]";
  }
  return std::string(to_string(kind_));
}

TorusPoint MeasurePreservingMap::apply(const TorusPoint& x) const {
  switch (kind_) {
    case MapKind::cat:
      return TorusPoint(2.0 * x.x() + x.y(), x.x() + x.y());
    case MapKind::baker:
      return baker_apply(x);
    case MapKind::time_one_flow:
      return advect(*field_, x, 0.0, 1.0, steps_);
  }
  return x;
}

Mat2 MeasurePreservingMap::jacobian(const TorusPoint& x) const { return step(x).jacobian; }

MapStep MeasurePreservingMap::step(const TorusPoint& x) const {
  switch (kind_) {
    case MapKind::cat:
      return {apply(x), kCatMatrix};
    case MapKind::baker:
      return {baker_apply(x), kBakerJacobian};
    case MapKind::time_one_flow: {
      const CocycleState s = advect_cocycle(*field_, x, 0.0, 1.0, steps_);
      return {s.position, s.tangent};
    }
  }
  return {x, Mat2::identity()};
}

TorusPoint MeasurePreservingMap::inverse(const TorusPoint& x) const {
  switch (kind_) {
    case MapKind::cat:
      // inverse matrix [[1, -1], [-1, 2]]
      return TorusPoint(x.x() - x.y(), 2.0 * x.y() - x.x());
    case MapKind::baker:
      return baker_inverse(x);
    case MapKind::time_one_flow:
      return advect(*field_, x, 1.0, 0.0, steps_);
  }
  return x;
}

void MeasurePreservingMap::apply_batch(std::span<double> xs, std::span<double> ys) const {
  if (xs.size() != ys.size()) throw InvalidArgument("coordinate arrays differ in length");
  if (kind_ == MapKind::time_one_flow) {
    advect_batch(*field_, xs, ys, 0.0, 1.0, steps_);
    return;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const TorusPoint p = apply(TorusPoint(xs[i], ys[i]));
    xs[i] = p.x();
    ys[i] = p.y();
  }
}

void MeasurePreservingMap::step_batch(std::span<double> xs, std::span<double> ys,
                                      std::span<Mat2> jacobians) const {
  const std::size_t n = xs.size();
  if (ys.size() != n || jacobians.size() != n) {
    throw InvalidArgument("batch arrays differ in length");
  }
  if (kind_ != MapKind::time_one_flow) {
    for (std::size_t i = 0; i < n; ++i) {
      const MapStep s = step(TorusPoint(xs[i], ys[i]));
      xs[i] = s.image.x();
      ys[i] = s.image.y();
      jacobians[i] = s.jacobian;
    }
    return;
  }
  std::vector<double> w00(n, 1.0), w01(n, 0.0), w10(n, 0.0), w11(n, 1.0);
  advect_cocycle_batch(*field_, {xs, ys, w00, w01, w10, w11}, 0.0, 1.0, steps_);
  for (std::size_t i = 0; i < n; ++i) jacobians[i] = {w00[i], w01[i], w10[i], w11[i]};
}

double singular_set_distance(const MeasurePreservingMap& map, const TorusPoint& x) {
  if (map.kind() != MapKind::baker) return std::numeric_limits<double>::infinity();
  const double dx = std::fmin(std::fmin(x.x(), 1.0 - x.x()), std::fabs(x.x() - 0.5));
  const double dy = std::fmin(x.y(), 1.0 - x.y());
  return std::fmin(dx, dy);
}

std::optional<double> lusin_lipschitz_weight(const MeasurePreservingMap& map,
                                             const TorusPoint& x) {
  switch (map.kind()) {
    case MapKind::cat:
      return 0.5 * std::log(3.0);
    case MapKind::baker: {
      const double dist = singular_set_distance(map, x);
      return 0.5 * std::log(2.0) + std::fmax(0.0, -std::log(dist));
    }
    case MapKind::time_one_flow:
      return std::nullopt;
  }
  return std::nullopt;
}

LipschitzCheck check_lusin_lipschitz(const MeasurePreservingMap& map, std::size_t pair_count,
                                     std::uint64_t seed, double min_singular_distance) {
  if (map.kind() == MapKind::time_one_flow) {
    throw InvalidArgument("no closed-form Lusin-Lipschitz weight for flow maps");
  }
  Rng rng(seed);
  LipschitzCheck out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pair_count; ++i) {
    const TorusPoint p(rng.uniform(), rng.uniform());
    TorusPoint q;
    if (i % 2 == 0) {
      q = TorusPoint(rng.uniform(), rng.uniform());
    } else {
      const double scale = std::pow(10.0, -rng.uniform(1.0, 6.0));
      q = TorusPoint(p.x() + scale * rng.uniform(-1.0, 1.0),
                     p.y() + scale * rng.uniform(-1.0, 1.0));
    }
    if (singular_set_distance(map, p) < min_singular_distance ||
        singular_set_distance(map, q) < min_singular_distance) {
      ++out.pairs_skipped;
      continue;
    }
    const double d = torus_distance(p, q);
    if (d == 0.0) continue;
    const double dt = torus_distance(map.apply(p), map.apply(q));
    const double margin = std::log(dt) - std::log(d) - *lusin_lipschitz_weight(map, p) -
                          *lusin_lipschitz_weight(map, q);
    ++out.pairs_tested;
    // relative roundoff slack on the distances
    if (margin > 1e-9) ++out.violations;
    out.worst_margin = std::fmax(out.worst_margin, margin);
  }
  return out;
}

}  // namespace ergomix
