#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ergomix/errors.hpp"
#include "ergomix/flow.hpp"
#include "ergomix/maps.hpp"
#include "ergomix/rng.hpp"

using namespace ergomix;

namespace {

constexpr double kPi = std::numbers::pi;

VelocityField field(FieldKind kind, double amp = 1.0) {
  return make_field({kind, amp, {0.0, 0.0}, 1});
}

TorusPoint random_point(Rng& rng) { return TorusPoint(rng.uniform(), rng.uniform()); }

// Wilson-Hilferty approximation of the chi-square quantile.
double chi2_quantile(double df, double z) {
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

double chi2_uniformity(const MeasurePreservingMap& map, std::size_t samples, std::uint64_t seed) {
  constexpr int kBins = 32;
  Rng rng(seed);
  std::vector<double> xs(samples), ys(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }
  map.apply_batch(xs, ys);
  std::vector<double> counts(kBins * kBins, 0.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const int bx = static_cast<int>(xs[i] * kBins);
    const int by = static_cast<int>(ys[i] * kBins);
    counts[by * kBins + bx] += 1.0;
  }
  const double expected = static_cast<double>(samples) / (kBins * kBins);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  return chi2;
}

}  // namespace

TEST_CASE("map kinds round-trip through their names") {
  for (auto k : {MapKind::cat, MapKind::baker, MapKind::time_one_flow}) {
    CHECK(map_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(map_kind_from_string("horseshoe"), InvalidArgument);
  CHECK_THROWS_AS(MeasurePreservingMap::time_one_flow(field(FieldKind::zero), 0), InvalidArgument);
}

TEST_CASE("cat map examples") {
  const auto cat = MeasurePreservingMap::cat();
  const auto img = cat.apply(TorusPoint(0.5, 0.5));
  CHECK(img.x() == 0.5);
  CHECK(img.y() == 0.0);
  CHECK(cat.jacobian(TorusPoint(0.1, 0.7)) == Mat2{2.0, 1.0, 1.0, 1.0});
  const auto pre = cat.inverse(TorusPoint(0.5, 0.0));
  CHECK(pre.x() == 0.5);
  CHECK(pre.y() == 0.5);
}

TEST_CASE("baker map examples") {
  const auto baker = MeasurePreservingMap::baker();
  const auto img = baker.apply(TorusPoint(0.25, 0.5));
  CHECK(img.x() == 0.5);
  CHECK(img.y() == 0.25);
  CHECK(baker.jacobian(TorusPoint(0.25, 0.5)) == Mat2{2.0, 0.0, 0.0, 0.5});
  const auto right = baker.apply(TorusPoint(0.75, 0.5));
  CHECK(right.x() == 0.5);
  CHECK(right.y() == 0.75);
  const auto pre = baker.inverse(TorusPoint(0.5, 0.25));
  CHECK(pre.x() == 0.25);
  CHECK(pre.y() == 0.5);
}

TEST_CASE("baker singular lines raise SingularInputError") {
  const auto baker = MeasurePreservingMap::baker();
  CHECK_THROWS_AS(baker.apply(TorusPoint(0.5, 0.3)), SingularInputError);
  CHECK_THROWS_AS(baker.jacobian(TorusPoint(0.5, 0.3)), SingularInputError);
  CHECK_THROWS_AS(baker.step(TorusPoint(0.5, 0.3)), SingularInputError);
  CHECK_THROWS_AS(baker.inverse(TorusPoint(0.3, 0.5)), SingularInputError);
  std::vector<double> xs{0.1, 0.5}, ys{0.2, 0.2};
  CHECK_THROWS_AS(baker.apply_batch(xs, ys), SingularInputError);
}

TEST_CASE("time-one map of the zero field is the identity") {
  const auto id = MeasurePreservingMap::time_one_flow(field(FieldKind::zero), 64);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_point(rng);
    CHECK(id.apply(x) == x);
    CHECK(id.jacobian(x) == Mat2::identity());
  }
}

TEST_CASE("time-one steady shear Jacobian has the closed form") {
  const auto map = MeasurePreservingMap::time_one_flow(field(FieldKind::steady_shear), 256);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_point(rng);
    const Mat2 j = map.jacobian(x);
    CHECK(std::fabs(j.a - 1.0) <= 1e-12);
    CHECK(std::fabs(j.b - 2.0 * kPi * std::cos(2.0 * kPi * x.y())) <= 1e-10);
    CHECK(std::fabs(j.c) <= 1e-12);
    CHECK(std::fabs(j.d - 1.0) <= 1e-12);
  }
}

TEST_CASE("apply then inverse returns the argument") {
  Rng rng(5);
  const auto cat = MeasurePreservingMap::cat();
  const auto baker = MeasurePreservingMap::baker();
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_point(rng);
    CHECK(torus_distance(cat.inverse(cat.apply(x)), x) <= 1e-14);
    CHECK(torus_distance(baker.inverse(baker.apply(x)), x) <= 1e-15);
    CHECK(torus_distance(baker.apply(baker.inverse(x)), x) <= 1e-15);
  }
  for (auto kind : {FieldKind::alternating_shear, FieldKind::cellular}) {
    const auto map = MeasurePreservingMap::time_one_flow(field(kind), 256);
    for (int i = 0; i < 1000; ++i) {
      const auto x = random_point(rng);
      CHECK(torus_distance(map.inverse(map.apply(x)), x) <= 1e-5);
    }
  }
}

TEST_CASE("analytic Jacobians have unit determinant") {
  Rng rng(6);
  for (const auto& map : {MeasurePreservingMap::cat(), MeasurePreservingMap::baker()}) {
    for (int i = 0; i < 1000; ++i) {
      CHECK(std::fabs(map.jacobian(random_point(rng)).det()) == 1.0);
    }
  }
}

TEST_CASE("step and batch agree with apply and jacobian") {
  Rng rng(7);
  const std::vector<MeasurePreservingMap> maps{
      MeasurePreservingMap::cat(), MeasurePreservingMap::baker(),
      MeasurePreservingMap::time_one_flow(field(FieldKind::alternating_shear), 64)};
  for (const auto& map : maps) {
    std::vector<double> xs(257), ys(257);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs[i] = rng.uniform();
      ys[i] = rng.uniform();
    }
    auto bx = xs, by = ys;
    std::vector<Mat2> jac(xs.size());
    map.step_batch(bx, by, jac);
    auto ax = xs, ay = ys;
    map.apply_batch(ax, ay);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const TorusPoint x(xs[i], ys[i]);
      const auto s = map.step(x);
      CHECK(s.image == map.apply(x));
      CHECK(s.jacobian == map.jacobian(x));
      CHECK(TorusPoint(bx[i], by[i]) == s.image);
      CHECK(TorusPoint(ax[i], ay[i]) == s.image);
      CHECK(jac[i] == s.jacobian);
    }
  }
}

TEST_CASE("pushforward of uniform samples stays uniform") {
  // 32x32 bins, 1023 degrees of freedom, 99.9% quantile (z = 3.0902).
  const double limit = chi2_quantile(1023.0, 3.0902);
  CHECK(limit == doctest::Approx(1168.0).epsilon(0.01));
  CHECK(chi2_uniformity(MeasurePreservingMap::cat(), 1000000, 11) < limit);
  CHECK(chi2_uniformity(MeasurePreservingMap::baker(), 1000000, 12) < limit);
  CHECK(chi2_uniformity(
            MeasurePreservingMap::time_one_flow(field(FieldKind::alternating_shear), 128),
            1000000, 13) < limit);
}

TEST_CASE("non-measure-preserving image fails the uniformity test") {
  // Sanity check of the statistic: squaring x concentrates mass near 0.
  constexpr int kBins = 32;
  Rng rng(14);
  std::vector<double> counts(kBins * kBins, 0.0);
  const std::size_t samples = 1000000;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    counts[static_cast<int>(y * kBins) * kBins + static_cast<int>(x * x * kBins)] += 1.0;
  }
  const double expected = static_cast<double>(samples) / (kBins * kBins);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 > chi2_quantile(1023.0, 3.0902));
}

TEST_CASE("chain rule: Jacobian of a composition is the product along the orbit") {
  Rng rng(8);
  SUBCASE("cat") {
    const auto cat = MeasurePreservingMap::cat();
    const auto x = random_point(rng);
    const Mat2 two = cat.jacobian(cat.apply(x)) * cat.jacobian(x);
    CHECK(two == Mat2{5.0, 3.0, 3.0, 2.0});
  }
  SUBCASE("baker") {
    const auto baker = MeasurePreservingMap::baker();
    for (int i = 0; i < 100; ++i) {
      const auto x = random_point(rng);
      const Mat2 two = baker.jacobian(baker.apply(x)) * baker.jacobian(x);
      CHECK(two == Mat2{4.0, 0.0, 0.0, 0.25});
    }
  }
  SUBCASE("time-one flow against the two-period cocycle") {
    const auto f = field(FieldKind::cellular);
    const auto map = MeasurePreservingMap::time_one_flow(f, 128);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_point(rng);
      const Mat2 product = map.jacobian(map.apply(x)) * map.jacobian(x);
      const Mat2 direct = advect_cocycle(f, x, 0.0, 2.0, 256).tangent;
      CHECK(std::fabs(product.a - direct.a) <= 1e-8 * max_abs_entry(direct));
      CHECK(std::fabs(product.b - direct.b) <= 1e-8 * max_abs_entry(direct));
      CHECK(std::fabs(product.c - direct.c) <= 1e-8 * max_abs_entry(direct));
      CHECK(std::fabs(product.d - direct.d) <= 1e-8 * max_abs_entry(direct));
    }
  }
}

TEST_CASE("singular-set distance and Lipschitz weights") {
  const auto cat = MeasurePreservingMap::cat();
  const auto baker = MeasurePreservingMap::baker();
  CHECK(std::isinf(singular_set_distance(cat, TorusPoint(0.3, 0.3))));
  CHECK(singular_set_distance(baker, TorusPoint(0.45, 0.3)) == doctest::Approx(0.05));
  CHECK(singular_set_distance(baker, TorusPoint(0.3, 0.02)) == doctest::Approx(0.02));
  CHECK(*lusin_lipschitz_weight(cat, TorusPoint(0.1, 0.1)) == doctest::Approx(0.5 * std::log(3.0)));
  CHECK(*lusin_lipschitz_weight(baker, TorusPoint(0.25, 0.25)) ==
        doctest::Approx(0.5 * std::log(2.0) + std::log(4.0)));
  CHECK(*lusin_lipschitz_weight(baker, TorusPoint(0.5 - 1e-3, 0.25)) ==
        doctest::Approx(0.5 * std::log(2.0) + std::log(1e3)));
  CHECK_FALSE(lusin_lipschitz_weight(
                  MeasurePreservingMap::time_one_flow(field(FieldKind::zero), 8), TorusPoint())
                  .has_value());
}

TEST_CASE("Lusin-Lipschitz inequality holds on random pairs") {
  for (const auto& map : {MeasurePreservingMap::cat(), MeasurePreservingMap::baker()}) {
    const auto check = check_lusin_lipschitz(map, 10000, 9);
    CHECK(check.pairs_tested + check.pairs_skipped == 10000);
    CHECK(check.pairs_tested > 9000);
    CHECK(check.violations == 0);
    CHECK(check.worst_margin <= 1e-9);
  }
}
