#include <doctest.h>

#include <cmath>
#include <set>

#include "ergomix/parallel.hpp"
#include "ergomix/rng.hpp"
#include "ergomix/torus.hpp"
#include "oracles.hpp"

using namespace ergomix;

TEST_CASE("torus points are wrapped to [0, 1)") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const TorusPoint p(rng.uniform(-50, 50), rng.uniform(-50, 50));
    CHECK(p.x() >= 0.0);
    CHECK(p.x() < 1.0);
    CHECK(p.y() >= 0.0);
    CHECK(p.y() < 1.0);
  }
  CHECK(TorusPoint(-1e-18, 1.0).x() < 1.0);
  CHECK(TorusPoint(-1e-18, 1.0).y() == 0.0);
  CHECK(TorusPoint(2.25, -0.25) == TorusPoint(0.25, 0.75));
}

TEST_CASE("geodesic distance uses the nearest integer shift") {
  CHECK(torus_distance(TorusPoint(0.05, 0.5), TorusPoint(0.95, 0.5)) == doctest::Approx(0.1));
  CHECK(torus_distance(TorusPoint(0.0, 0.0), TorusPoint(0.5, 0.5)) == doctest::Approx(std::sqrt(0.5)));
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const TorusPoint p(rng.uniform(), rng.uniform()), q(rng.uniform(), rng.uniform());
    double best = 10;
    for (int sx = -1; sx <= 1; ++sx)
      for (int sy = -1; sy <= 1; ++sy)
        best = std::min(best, std::hypot(q.x() - p.x() + sx, q.y() - p.y() + sy));
    CHECK(torus_distance(p, q) == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("2x2 singular values agree with the long-double oracle") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Mat2 m{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const auto s = singular_values(m);
    const auto o = oracle::singular_values(m.a, m.b, m.c, m.d);
    CHECK(s[0] == doctest::Approx(static_cast<double>(o[0])).epsilon(1e-13));
    CHECK(std::fabs(s[1] - static_cast<double>(o[1])) <= 1e-13 * s[0]);
  }
}

TEST_CASE("derived seeds differ per stream and are reproducible") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 8; ++s) seen.insert(derive_seed(42, s));
  CHECK(seen.size() == 8);
  CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng u(10);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("parallel_for covers the range exactly once with aligned chunks") {
  std::vector<int> hits(1003, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    CHECK(b % 8 == 0);
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t, std::size_t) { throw std::runtime_error("x"); }),
                  std::runtime_error);
}
