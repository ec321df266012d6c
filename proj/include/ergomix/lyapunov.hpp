#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergomix/fields.hpp"
#include "ergomix/maps.hpp"
#include "ergomix/torus.hpp"

namespace ergomix {

using Exponents = std::array<double, 2>;

/// Running QR factorisation of a 2x2 cocycle product A_n ... A_1.
///
/// Keeps the accumulated triangular factor rescaled to unit max entry, so
/// the product is never formed and nothing overflows. log|det| is the exact
/// telescoped sum of log R_ii.
class QrAccumulator {
 public:
  void push(const Mat2& jacobian);

  int steps() const { return steps_; }
  /// log singular values of the product, descending.
  Exponents log_singular_values() const;
  /// (1/n) log singular values, descending.
  Exponents exponents() const;
  /// Right singular vectors of the product, matching log_singular_values().
  std::array<Vec2, 2> right_singular_vectors() const;

 private:
  Mat2 q_ = Mat2::identity();
  double q_det_ = 1.0;
  Mat2 r_ = Mat2::identity();  // scaled accumulated R
  double log_scale_ = 0.0;
  double log_det_ = 0.0;
  int steps_ = 0;
};

/// (1/n) log singular values of the product of the given Jacobians (first applied first).
Exponents spectrum_from_cocycle(std::span<const Mat2> jacobians);

/// Finite-time exponents of the n-fold Jacobian product along the orbit of x.
Exponents finite_time_spectrum(const MeasurePreservingMap& map, const TorusPoint& x, int n);

struct LyapunovReport {
  int n = 0;
  int sample_count = 0;
  int skipped = 0;
  std::vector<Exponents> per_sample_exponents;
  Exponents mean_exponents{0.0, 0.0};
  double lambda_max_integral = 0.0;
  double sum_positive = 0.0;
  Exponents stderr_{0.0, 0.0};
  double sum_positive_stderr = 0.0;
  std::string source;
};

/// Monte Carlo ensemble over sample_count uniform points. Samples hitting the
/// baker singular set are skipped and counted; more than 1% skipped throws.
LyapunovReport ensemble_spectrum(const MeasurePreservingMap& map, int sample_count, int n,
                                 std::uint64_t seed);

struct OseledetsFlag {
  std::vector<double> exponents;             // distinct, descending
  std::vector<std::vector<Vec2>> subspaces;  // orthonormal basis per exponent
  bool degenerate = false;
  std::string warning;
};

/// Finite-time Oseledets data from the right singular vectors of the n-fold
/// product. Exponents closer than 1e-6 are merged and flagged as degenerate.
OseledetsFlag oseledets_filtration(const MeasurePreservingMap& map, const TorusPoint& x, int n);

/// grad_l1_time_average(field) - report.lambda_max_integral.
double top_exponent_bound_gap(const VelocityField& field, const LyapunovReport& report,
                              const Quadrature& quadrature);

nlohmann::json to_json(const LyapunovReport& report);

}  // namespace ergomix
