#pragma once

#include <span>

#include "ergomix/fields.hpp"
#include "ergomix/maps.hpp"
#include "ergomix/torus.hpp"

namespace ergomix {

inline constexpr int kDefaultStepsPerUnit = 256;

/// Flow position X_t(x) together with the tangent matrix W_t(x).
struct CocycleState {
  TorusPoint position;
  Mat2 tangent = Mat2::identity();
};

/// RK4 approximation of X(t1; t0, x). t1 < t0 integrates backward (inverse flow).
TorusPoint advect(const VelocityField& field, const TorusPoint& x, double t0, double t1,
                  int steps);

/// Joint RK4 integration of position and tangent, starting from W = identity.
/// The position is bitwise equal to advect(). Throws DivergenceError if an
/// entry of W exceeds 1e12 or is not finite.
CocycleState advect_cocycle(const VelocityField& field, const TorusPoint& x, double t0,
                            double t1, int steps);

/// log det W over [t0, t1], summed over the linear factor of every RK4 step.
/// Stays accurate where det(advect_cocycle(...).tangent) cannot: once |W|
/// exceeds ~1e5, rounding the four entries alone moves det W by more than 1e-6.
double tangent_log_det(const VelocityField& field, const TorusPoint& x, double t0, double t1,
                       int steps);

/// In-place batched advection of points given as separate coordinate arrays.
/// Uses the active SIMD kernels and all workers; bitwise equal to advect().
void advect_batch(const VelocityField& field, std::span<double> xs, std::span<double> ys,
                  double t0, double t1, int steps);

/// Batched cocycle integration; W arrays hold the initial tangent on entry.
struct CocycleArrays {
  std::span<double> x, y, w00, w01, w10, w11;
};
void advect_cocycle_batch(const VelocityField& field, const CocycleArrays& batch, double t0,
                          double t1, int steps);

/// Time-one map X_1 as a measure-preserving map; its inverse integrates over [1, 0].
MeasurePreservingMap time_one_map(const VelocityField& field, int steps = kDefaultStepsPerUnit);

}  // namespace ergomix
