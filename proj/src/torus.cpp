#include "ergomix/torus.hpp"

namespace ergomix {

std::array<double, 2> singular_values(const Mat2& m) {
  // sigma_max/min = (sqrt((a+d)^2 + (b-c)^2) +- sqrt((a-d)^2 + (b+c)^2)) / 2
  const double s = m.a + m.d, t = m.b - m.c, u = m.a - m.d, v = m.b + m.c;
  const double p = std::sqrt(s * s + t * t);
  const double q = std::sqrt(u * u + v * v);
  return {0.5 * (p + q), 0.5 * std::fabs(p - q)};
}

}  // namespace ergomix
