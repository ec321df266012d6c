#include "ergomix/flow.hpp"

#include <cmath>
#include <string>

#include "ergomix/errors.hpp"
#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/kernels/rk4_body.hpp"
#include "ergomix/parallel.hpp"

namespace ergomix {
namespace {

constexpr double kDivergenceLimit = 1e12;

void check_steps(int steps) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
}

void check_times(double t0, double t1) {
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw InvalidArgument("times must be finite");
}

bool diverged(double w) { return !(std::fabs(w) <= kDivergenceLimit); }

}  // namespace

TorusPoint advect(const VelocityField& field, const TorusPoint& x, double t0, double t1,
                  int steps) {
  check_steps(steps);
  check_times(t0, t1);
  double px = x.x(), py = x.y();
  kernels::rk4_positions<double>(field.coeffs(), t0, t1, steps, px, py);
  return TorusPoint(px, py);
}

CocycleState advect_cocycle(const VelocityField& field, const TorusPoint& x, double t0,
                            double t1, int steps) {
  check_steps(steps);
  check_times(t0, t1);
  double px = x.x(), py = x.y();
  Mat2 w = Mat2::identity();
  kernels::rk4_cocycle<double>(field.coeffs(), t0, t1, steps, px, py, w.a, w.b, w.c, w.d);
  if (diverged(w.a) || diverged(w.b) || diverged(w.c) || diverged(w.d)) {
    throw DivergenceError("tangent cocycle exceeded 1e12 for " + field.describe() +
                          "; increase steps per unit time");
  }
  return {TorusPoint(px, py), w};
}

double tangent_log_det(const VelocityField& field, const TorusPoint& x, double t0, double t1,
                       int steps) {
  check_steps(steps);
  check_times(t0, t1);
  const double h = (t1 - t0) / steps;
  double px = x.x(), py = x.y();
  double log_det = 0.0;
  for (int s = 0; s < steps; ++s) {
    Mat2 m = Mat2::identity();
    kernels::rk4_cocycle<double>(field.coeffs(), t0 + s * h, t0 + (s + 1) * h, 1, px, py, m.a,
                                 m.b, m.c, m.d);
    log_det += std::log(m.det());
  }
  return log_det;
}

void advect_batch(const VelocityField& field, std::span<double> xs, std::span<double> ys,
                  double t0, double t1, int steps) {
  check_steps(steps);
  check_times(t0, t1);
  if (xs.size() != ys.size()) throw InvalidArgument("coordinate arrays differ in length");
  const auto& k = kernels::active_kernels();
  parallel_for(xs.size(), [&](std::size_t begin, std::size_t end) {
    k.advect(field.coeffs(), t0, t1, steps, xs.data() + begin, ys.data() + begin, end - begin);
  });
}

void advect_cocycle_batch(const VelocityField& field, const CocycleArrays& b, double t0,
                          double t1, int steps) {
  check_steps(steps);
  check_times(t0, t1);
  const std::size_t n = b.x.size();
  if (b.y.size() != n || b.w00.size() != n || b.w01.size() != n || b.w10.size() != n ||
      b.w11.size() != n) {
    throw InvalidArgument("cocycle arrays differ in length");
  }
  const auto& k = kernels::active_kernels();
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    kernels::CocycleBatch view{b.x.data() + begin,   b.y.data() + begin,
                               b.w00.data() + begin, b.w01.data() + begin,
                               b.w10.data() + begin, b.w11.data() + begin};
    k.advect_cocycle(field.coeffs(), t0, t1, steps, view, end - begin);
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (diverged(b.w00[i]) || diverged(b.w01[i]) || diverged(b.w10[i]) || diverged(b.w11[i])) {
      throw DivergenceError("tangent cocycle exceeded 1e12 for " + field.describe() +
                            "; increase steps per unit time");
    }
  }
}

MeasurePreservingMap time_one_map(const VelocityField& field, int steps) {
  check_steps(steps);
  return MeasurePreservingMap::time_one_flow(field, steps);
}

}  // namespace ergomix
