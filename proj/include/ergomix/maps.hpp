#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ergomix/fields.hpp"
#include "ergomix/torus.hpp"

namespace ergomix {

enum class MapKind { cat, baker, time_one_flow };

std::string_view to_string(MapKind kind);
MapKind map_kind_from_string(std::string_view name);

/// Image of a point together with the Jacobian of the map there.
struct MapStep {
  TorusPoint image;
  Mat2 jacobian;
};

/// Lebesgue-measure-preserving map of T^2: Arnold's cat map [[2,1],[1,1]],
/// the baker's map, or the time-one map of a catalog flow.
///
/// The baker's map is (2x, y/2) for x < 1/2 and (2x - 1, (y + 1)/2) for
/// x > 1/2. Points with x = 1/2 exactly (inverse: y = 1/2) raise
/// SingularInputError.
class MeasurePreservingMap {
 public:
  static MeasurePreservingMap cat();
  static MeasurePreservingMap baker();
  static MeasurePreservingMap time_one_flow(const VelocityField& field, int steps);

  MapKind kind() const { return kind_; }
  /// Underlying field for time_one_flow, nullptr otherwise.
  const VelocityField* field() const { return field_ ? &*field_ : nullptr; }
  int steps() const { return steps_; }
  std::string describe() const;

  TorusPoint apply(const TorusPoint& x) const;
  Mat2 jacobian(const TorusPoint& x) const;
  TorusPoint inverse(const TorusPoint& x) const;

  /// apply() and jacobian() from a single evaluation.
  MapStep step(const TorusPoint& x) const;

  /// In-place forward application to coordinate arrays.
  void apply_batch(std::span<double> xs, std::span<double> ys) const;

  /// In-place forward application that also writes each point's Jacobian.
  void step_batch(std::span<double> xs, std::span<double> ys, std::span<Mat2> jacobians) const;

 private:
  MeasurePreservingMap(MapKind kind, std::optional<VelocityField> field, int steps)
      : kind_(kind), field_(std::move(field)), steps_(steps) {}

  MapKind kind_;
  std::optional<VelocityField> field_;
  int steps_ = 0;
};

/// Distance from x to the set where the map is discontinuous as a torus map
/// (baker: the lines x1 = 0, x1 = 1/2, x2 = 0). Infinity for continuous maps.
double singular_set_distance(const MeasurePreservingMap& map, const TorusPoint& x);

/// Weight g with d(T x, T y) <= exp(g(x) + g(y)) d(x, y): (1/2) log 3 for the
/// cat map; (1/2) log 2 + log+(1 / dist(x, S)) for the baker's map. No closed
/// form is provided for flow maps (nullopt).
std::optional<double> lusin_lipschitz_weight(const MeasurePreservingMap& map,
                                             const TorusPoint& x);

struct LipschitzCheck {
  std::size_t pairs_tested = 0;
  std::size_t pairs_skipped = 0;  // too close to the singular set
  std::size_t violations = 0;
  double worst_margin = 0.0;  // max of log d(Tx,Ty) - log d(x,y) - g(x) - g(y)
};

/// Empirical check of the Lusin-Lipschitz inequality on random pairs, half of
/// them at small separations. Points within min_singular_distance of the
/// singular set are skipped.
LipschitzCheck check_lusin_lipschitz(const MeasurePreservingMap& map, std::size_t pair_count,
                                     std::uint64_t seed, double min_singular_distance = 1e-3);

}  // namespace ergomix
