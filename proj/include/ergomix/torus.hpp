#pragma once

#include <array>
#include <cmath>

namespace ergomix {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  Mat2 transpose() const { return {a, c, b, d}; }
  Vec2 col(int j) const { return j == 0 ? Vec2{a, c} : Vec2{b, d}; }

  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Singular values of a 2x2 matrix, descending.
std::array<double, 2> singular_values(const Mat2& m);

/// Spectral (operator-2) norm.
inline double operator_norm(const Mat2& m) { return singular_values(m)[0]; }

inline double max_abs_entry(const Mat2& m) {
  return std::fmax(std::fmax(std::fabs(m.a), std::fabs(m.b)),
                   std::fmax(std::fabs(m.c), std::fabs(m.d)));
}

/// Reduce a coordinate to [0, 1).
inline double wrap_unit(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? r - 1.0 : r;
}

/// Point of the flat torus R^2 / Z^2 with canonical coordinates in [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  TorusPoint(double x, double y) : p_{wrap_unit(x), wrap_unit(y)} {}
  explicit TorusPoint(Vec2 v) : TorusPoint(v.x, v.y) {}

  double x() const { return p_.x; }
  double y() const { return p_.y; }
  double operator[](int i) const { return i == 0 ? p_.x : p_.y; }
  Vec2 coords() const { return p_; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  Vec2 p_;
};

/// Signed shortest displacement from a to b along one periodic axis, in [-1/2, 1/2].
inline double periodic_delta(double a, double b) {
  double d = b - a;
  return d - std::nearbyint(d);
}

/// Geodesic distance on the torus.
inline double torus_distance(const TorusPoint& p, const TorusPoint& q) {
  return std::hypot(periodic_delta(p.x(), q.x()), periodic_delta(p.y(), q.y()));
}

}  // namespace ergomix
