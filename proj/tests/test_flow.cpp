#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "ergomix/errors.hpp"
#include "ergomix/flow.hpp"
#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/rng.hpp"

using namespace ergomix;

namespace {

constexpr double kPi = std::numbers::pi;

VelocityField field(FieldKind kind, double amp = 1.0, std::vector<double> phases = {0.0, 0.0},
                    int k = 1) {
  return make_field({kind, amp, std::move(phases), k});
}

std::vector<VelocityField> catalog(double amp) {
  return {field(FieldKind::zero, amp), field(FieldKind::constant, amp, {0.3, 0.0}),
          field(FieldKind::steady_shear, amp, {0.1, 0.0}),
          field(FieldKind::alternating_shear, amp, {0.2, 0.6}),
          field(FieldKind::cellular, amp, {0.15, 0.4})};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("zero field leaves points fixed") {
  const auto f = field(FieldKind::zero);
  const TorusPoint p(0.3, 0.8);
  CHECK(advect(f, p, 0.0, 3.7, 11) == p);
  const auto s = advect_cocycle(f, p, 0.0, 2.0, 64);
  CHECK(s.position == p);
  CHECK(s.tangent == Mat2::identity());
}

TEST_CASE("constant field is a translation") {
  const auto f = field(FieldKind::constant, 0.7, {0.125, 0.0});
  const double cx = 0.7 * std::cos(2 * kPi * 0.125), cy = 0.7 * std::sin(2 * kPi * 0.125);
  const TorusPoint p(0.1, 0.9);
  const auto q = advect(f, p, 0.0, 2.5, 40);
  CHECK(torus_distance(q, TorusPoint(0.1 + 2.5 * cx, 0.9 + 2.5 * cy)) <= 1e-12);
}

TEST_CASE("steady shear flow has the closed-form solution") {
  const auto f = field(FieldKind::steady_shear);
  CHECK(torus_distance(advect(f, TorusPoint(0.5, 0.25), 0.0, 1.0, 256), TorusPoint(0.5, 0.25)) <= 1e-12);
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(), y = rng.uniform(), t = rng.uniform(0.0, 3.0);
    const auto s = advect_cocycle(f, TorusPoint(x, y), 0.0, t, 17);
    CHECK(torus_distance(s.position, TorusPoint(x + t * std::sin(2 * kPi * y), y)) <= 1e-12);
    CHECK(std::fabs(s.tangent.a - 1.0) <= 1e-12);
    CHECK(std::fabs(s.tangent.b - t * 2 * kPi * std::cos(2 * kPi * y)) <= 1e-11);
    CHECK(std::fabs(s.tangent.c) <= 1e-12);
    CHECK(std::fabs(s.tangent.d - 1.0) <= 1e-12);
  }
}

TEST_CASE("time-one map of the steady shear is exact at any step count") {
  const auto f = field(FieldKind::steady_shear);
  Rng rng(12);
  for (int steps : {1, 7, 256}) {
    const auto map = time_one_map(f, steps);
    for (int i = 0; i < 100; ++i) {
      const double x = rng.uniform(), y = rng.uniform();
      CHECK(torus_distance(map.apply(TorusPoint(x, y)), TorusPoint(x + std::sin(2 * kPi * y), y)) <= 1e-12);
      const Mat2 j = map.jacobian(TorusPoint(x, y));
      CHECK(std::fabs(j.b - 2 * kPi * std::cos(2 * kPi * y)) <= 1e-11);
    }
  }
}

TEST_CASE("alternating shear time-one map is the composition of two shear maps") {
  const double a = 1.3, p0 = 0.2, p1 = 0.6;
  const auto f = field(FieldKind::alternating_shear, a, {p0, p1});
  const auto map = time_one_map(f, 256);
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const double x = rng.uniform(), y = rng.uniform();
    const double x1 = x + 0.5 * a * std::sin(2 * kPi * (y + p0));
    const double y2 = y + 0.5 * a * std::sin(2 * kPi * (x1 + p1));
    // RK4 integrates each frozen shear exactly, so the bound is roundoff.
    CHECK(torus_distance(map.apply(TorusPoint(x, y)), TorusPoint(x1, y2)) <= 1e-12);
  }
  const auto identity = time_one_map(field(FieldKind::zero), 256);
  CHECK(identity.apply(TorusPoint(0.4, 0.6)) == TorusPoint(0.4, 0.6));
}

TEST_CASE("backward integration inverts the flow") {
  Rng rng(14);
  for (double amp : {0.5, 2.0}) {
    for (const auto& f : catalog(amp)) {
      for (int i = 0; i < 1000; ++i) {
        const TorusPoint x(rng.uniform(), rng.uniform());
        const auto y = advect(f, x, 0.0, 1.0, 256);
        CHECK(torus_distance(advect(f, y, 1.0, 0.0, 256), x) <= 1e-5);
      }
    }
  }
}

TEST_CASE("tangent determinant stays 1 up to t = 10") {
  Rng rng(15);
  for (double amp : {1.0, 2.0}) {
    for (const auto& f : catalog(amp)) {
      for (int i = 0; i < 1000; ++i) {
        const TorusPoint x(rng.uniform(), rng.uniform());
        const double t = rng.uniform(0.0, 10.0);
        const int steps = std::max(1, static_cast<int>(std::lround(t * 256)));
        CHECK(std::fabs(std::expm1(tangent_log_det(f, x, 0.0, t, steps))) <= 1e-6);
      }
    }
  }
}

TEST_CASE("stored tangent keeps det 1 while it is representable") {
  // rounding W's entries perturbs det W by ~1e-16 |W|^2
  Rng rng(21);
  int checked = 0;
  for (const auto& f : catalog(1.0)) {
    for (int i = 0; i < 1000; ++i) {
      const TorusPoint x(rng.uniform(), rng.uniform());
      const double t = rng.uniform(0.0, 10.0);
      const auto s = advect_cocycle(f, x, 0.0, t, std::max(1, static_cast<int>(std::lround(t * 256))));
      if (max_abs_entry(s.tangent) > 1e4) continue;
      ++checked;
      CHECK(std::fabs(s.tangent.det() - 1.0) <= 1e-6);
    }
  }
  CHECK(checked > 3000);
}

TEST_CASE("flow has the group property over periods") {
  Rng rng(16);
  for (const auto& f : catalog(1.5)) {
    for (int i = 0; i < 200; ++i) {
      const TorusPoint x(rng.uniform(), rng.uniform());
      const auto two_step = advect(f, advect(f, x, 0.0, 1.0, 256), 1.0, 2.0, 256);
      CHECK(torus_distance(two_step, advect(f, x, 0.0, 2.0, 512)) <= 1e-8);
    }
  }
}

TEST_CASE("RK4 is fourth order on the cellular field") {
  const auto f = field(FieldKind::cellular, 1.0, {0.1, 0.3});
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    const TorusPoint x(rng.uniform(), rng.uniform());
    const auto ref = advect(f, x, 0.0, 1.0, 8 * 64);
    const double coarse = torus_distance(advect(f, x, 0.0, 1.0, 16), ref);
    const double fine = torus_distance(advect(f, x, 0.0, 1.0, 32), ref);
    if (coarse < 1e-12) continue;  // stagnation points
    CHECK(coarse / fine >= 8.0);
  }
}

TEST_CASE("cocycle position is bitwise the advected position") {
  Rng rng(18);
  for (const auto& f : catalog(1.2)) {
    for (int i = 0; i < 100; ++i) {
      const TorusPoint x(rng.uniform(), rng.uniform());
      CHECK(advect_cocycle(f, x, 0.0, 1.0, 64).position == advect(f, x, 0.0, 1.0, 64));
    }
  }
}

TEST_CASE("coarse steps on a stiff field raise DivergenceError") {
  const auto f = field(FieldKind::cellular, 1e5);
  CHECK_THROWS_AS(advect_cocycle(f, TorusPoint(0.1, 0.2), 0.0, 1.0, 1), DivergenceError);
  CHECK_THROWS_AS(advect(f, TorusPoint(0.1, 0.2), 0.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("every kernel table matches the scalar reference bitwise") {
  const auto& ref = kernels::scalar_kernels();
  Rng rng(19);
  const std::size_t n = 1003;  // not a multiple of any lane width
  for (const auto* table : kernels::available_kernels()) {
    CAPTURE(table->name);
    for (const auto& f : catalog(1.7)) {
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform();
        y[i] = rng.uniform();
      }
      auto xr = x, yr = y;
      table->advect(f.coeffs(), 0.25, 1.75, 37, x.data(), y.data(), n);
      ref.advect(f.coeffs(), 0.25, 1.75, 37, xr.data(), yr.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(same_bits(x[i], xr[i]));
        CHECK(same_bits(y[i], yr[i]));
      }

      std::vector<double> w00(n, 1.0), w01(n, 0.0), w10(n, 0.0), w11(n, 1.0);
      auto a00 = w00, a01 = w01, a10 = w10, a11 = w11;
      auto cx = xr, cy = yr;
      table->advect_cocycle(f.coeffs(), 1.0, 0.0, 29,
                            {x.data(), y.data(), w00.data(), w01.data(), w10.data(), w11.data()}, n);
      ref.advect_cocycle(f.coeffs(), 1.0, 0.0, 29,
                         {cx.data(), cy.data(), a00.data(), a01.data(), a10.data(), a11.data()}, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(same_bits(x[i], cx[i]));
        CHECK(same_bits(w00[i], a00[i]));
        CHECK(same_bits(w01[i], a01[i]));
        CHECK(same_bits(w10[i], a10[i]));
        CHECK(same_bits(w11[i], a11[i]));
      }
    }
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(-1, 1);
      b[i] = rng.uniform(-1, 1);
    }
    const double s = table->sum_sq_diff(a.data(), b.data(), n);
    CHECK(s == doctest::Approx(ref.sum_sq_diff(a.data(), b.data(), n)).epsilon(1e-13));
  }
}

TEST_CASE("batched advection equals pointwise advection bitwise") {
  Rng rng(20);
  for (const auto& f : catalog(1.1)) {
    std::vector<double> x(777), y(777);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.uniform();
      y[i] = rng.uniform();
    }
    auto bx = x, by = y;
    advect_batch(f, bx, by, 0.0, 1.0, 64);
    std::vector<double> w00(x.size(), 1.0), w01(x.size(), 0.0), w10(x.size(), 0.0), w11(x.size(), 1.0);
    auto cx = x, cy = y;
    advect_cocycle_batch(f, {cx, cy, w00, w01, w10, w11}, 0.0, 1.0, 64);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto s = advect_cocycle(f, TorusPoint(x[i], y[i]), 0.0, 1.0, 64);
      CHECK(bx[i] == s.position.x());
      CHECK(by[i] == s.position.y());
      CHECK(cx[i] == s.position.x());
      CHECK(Mat2{w00[i], w01[i], w10[i], w11[i]} == s.tangent);
    }
  }
}
