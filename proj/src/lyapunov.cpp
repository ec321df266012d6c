#include "ergomix/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ergomix/errors.hpp"
#include "ergomix/parallel.hpp"
#include "ergomix/rng.hpp"

namespace ergomix {
namespace {

constexpr double kDegenerateGap = 1e-6;
constexpr double kMaxSkippedFraction = 0.01;

Mat2 scaled(const Mat2& m, double s) { return {m.a * s, m.b * s, m.c * s, m.d * s}; }

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments out;
  if (v.empty()) return out;
  double sum = 0.0;
  for (double x : v) sum += x;
  out.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    const double var = ss / static_cast<double>(v.size() - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(v.size()));
  }
  return out;
}

}  // namespace

void QrAccumulator::push(const Mat2& jacobian) {
  const Mat2 m = jacobian * q_;
  const double r00 = std::hypot(m.a, m.c);
  const double det = jacobian.det() * q_det_;
  if (!(r00 > 0.0) || !std::isfinite(r00) || det == 0.0 || !std::isfinite(det)) {
    throw NonFiniteError("QR step produced a zero or non-finite R diagonal entry");
  }
  const Vec2 q0{m.a / r00, m.c / r00};
  // q1 is the unit normal to q0 that makes r11 positive.
  const double orient = det > 0.0 ? 1.0 : -1.0;
  const Vec2 q1{-orient * q0.y, orient * q0.x};
  const double r01 = dot(q0, m.col(1));
  const double r11 = std::fabs(det) / r00;

  q_ = {q0.x, q1.x, q0.y, q1.y};
  q_det_ = orient;

  const Mat2 rk{r00, r01, 0.0, r11};
  Mat2 r = rk * r_;
  const double s = max_abs_entry(r);
  r_ = scaled(r, 1.0 / s);
  log_scale_ += std::log(s);
  log_det_ += std::log(r00) + std::log(r11);
  ++steps_;
}

Exponents QrAccumulator::log_singular_values() const {
  const double top = log_scale_ + std::log(singular_values(r_)[0]);
  return {top, log_det_ - top};
}

Exponents QrAccumulator::exponents() const {
  if (steps_ == 0) return {0.0, 0.0};
  const auto l = log_singular_values();
  return {l[0] / steps_, l[1] / steps_};
}

std::array<Vec2, 2> QrAccumulator::right_singular_vectors() const {
  // eigenvectors of R^T R; its principal axis angle
  const Mat2 g = r_.transpose() * r_;
  const double theta = 0.5 * std::atan2(2.0 * g.b, g.a - g.d);
  const Vec2 v0{std::cos(theta), std::sin(theta)};
  return {v0, Vec2{-v0.y, v0.x}};
}

Exponents spectrum_from_cocycle(std::span<const Mat2> jacobians) {
  if (jacobians.empty()) throw InvalidArgument("cocycle must have at least one factor");
  QrAccumulator acc;
  for (const auto& j : jacobians) acc.push(j);
  return acc.exponents();
}

Exponents finite_time_spectrum(const MeasurePreservingMap& map, const TorusPoint& x, int n) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  QrAccumulator acc;
  TorusPoint p = x;
  for (int i = 0; i < n; ++i) {
    const MapStep s = map.step(p);
    acc.push(s.jacobian);
    p = s.image;
  }
  return acc.exponents();
}

LyapunovReport ensemble_spectrum(const MeasurePreservingMap& map, int sample_count, int n,
                                 std::uint64_t seed) {
  if (sample_count < 1) throw InvalidArgument("sample_count must be >= 1");
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const auto count = static_cast<std::size_t>(sample_count);

  std::vector<double> xs(count), ys(count);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }

  std::vector<std::optional<Exponents>> results(count);
  if (map.kind() == MapKind::time_one_flow) {
    std::vector<QrAccumulator> accs(count);
    std::vector<Mat2> jac(count);
    for (int it = 0; it < n; ++it) {
      map.step_batch(xs, ys, jac);
      parallel_for(count, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) accs[i].push(jac[i]);
      });
    }
    for (std::size_t i = 0; i < count; ++i) results[i] = accs[i].exponents();
  } else {
    parallel_for(count, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        try {
          results[i] = finite_time_spectrum(map, TorusPoint(xs[i], ys[i]), n);
        } catch (const SingularInputError&) {
          results[i].reset();
        }
      }
    });
  }

  LyapunovReport report;
  report.n = n;
  report.source = map.describe();
  std::vector<double> first, second, positive;
  for (const auto& r : results) {
    if (!r) {
      ++report.skipped;
      continue;
    }
    report.per_sample_exponents.push_back(*r);
    first.push_back((*r)[0]);
    second.push_back((*r)[1]);
    positive.push_back(std::fmax((*r)[0], 0.0) + std::fmax((*r)[1], 0.0));
  }
  if (static_cast<double>(report.skipped) > kMaxSkippedFraction * sample_count) {
    throw SingularInputError(std::to_string(report.skipped) + " of " +
                             std::to_string(sample_count) +
                             " samples hit the singular set (limit 1%)");
  }
  report.sample_count = static_cast<int>(first.size());
  const Moments m0 = moments(first), m1 = moments(second), mp = moments(positive);
  report.mean_exponents = {m0.mean, m1.mean};
  report.stderr_ = {m0.stderr_, m1.stderr_};
  report.lambda_max_integral = m0.mean;
  report.sum_positive = mp.mean;
  report.sum_positive_stderr = mp.stderr_;
  return report;
}

OseledetsFlag oseledets_filtration(const MeasurePreservingMap& map, const TorusPoint& x, int n) {
  if (n < 2) throw InvalidArgument("n must be >= 2");
  QrAccumulator acc;
  TorusPoint p = x;
  for (int i = 0; i < n; ++i) {
    const MapStep s = map.step(p);
    acc.push(s.jacobian);
    p = s.image;
  }
  const Exponents ex = acc.exponents();
  const auto vs = acc.right_singular_vectors();
  OseledetsFlag flag;
  if (ex[0] - ex[1] < kDegenerateGap) {
    flag.degenerate = true;
    flag.warning = "degenerate finite-time spectrum: top exponents differ by less than 1e-6";
    flag.exponents = {0.5 * (ex[0] + ex[1])};
    flag.subspaces = {{Vec2{1.0, 0.0}, Vec2{0.0, 1.0}}};
    return flag;
  }
  flag.exponents = {ex[0], ex[1]};
  flag.subspaces = {{vs[0]}, {vs[1]}};
  return flag;
}

double top_exponent_bound_gap(const VelocityField& field, const LyapunovReport& report,
                              const Quadrature& quadrature) {
  return grad_l1_time_average(field, quadrature) - report.lambda_max_integral;
}

nlohmann::json to_json(const LyapunovReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["sample_count"] = report.sample_count;
  j["skipped"] = report.skipped;
  j["per_sample_exponents"] = report.per_sample_exponents;
  j["mean_exponents"] = report.mean_exponents;
  j["lambda_max_integral"] = report.lambda_max_integral;
  j["sum_positive"] = report.sum_positive;
  j["stderr"] = report.stderr_;
  j["sum_positive_stderr"] = report.sum_positive_stderr;
  j["source"] = report.source;
  j["matrix_norm"] = "operator-2";
  return j;
}

}  // namespace ergomix
