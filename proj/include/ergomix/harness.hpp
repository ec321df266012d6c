#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "ergomix/config.hpp"
#include "ergomix/diagnostics.hpp"
#include "ergomix/lyapunov.hpp"

namespace ergomix {

/// Random streams split off the config seed.
enum SeedStream : std::uint64_t {
  kStreamEntropy = 1,
  kStreamNu = 2,
  kStreamLyapunov = 3,
  kStreamLogSobolev = 4,
};

struct LinearFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
  /// One-sided p-value for slope > 0 (Student t, points - 2 dof).
  double p_value_growth = 1.0;
};

/// Least-squares line through (t, v) for t >= burn_in. Needs >= 4 points.
LinearFit fit_line(std::span<const double> times, std::span<const double> values, double burn_in);

/// Least-squares slope of -log(value) against t for t >= burn_in.
double fit_exponential_rate(std::span<const double> times, std::span<const double> values,
                            double burn_in);

struct LyapunovRun {
  LyapunovReport report;
  std::optional<double> grad_l1_average;
  std::optional<double> bound_gap;
  double max_exponent_sum = 0.0;  // max over samples of |lambda_1 + lambda_2|
  bool pass = false;
};

LyapunovRun run_lyapunov(const Config& config);

struct RuelleReport {
  double entropy_estimate = 0.0;
  double entropy_bias_bound = 0.0;
  double sum_positive_exponents = 0.0;
  double stderr_ = 0.0;
  double nu_log_bound_value = 0.0;
  bool pass = false;

  EntropyEstimate entropy;
  LyapunovReport lyapunov;
  int probes_per_cell = 0;
  std::string map;
};

RuelleReport run_ruelle(const Config& config);

struct MixingReport {
  DiagnosticSeries series;
  double fitted_h_minus_one_rate = 0.0;
  double fitted_log_sobolev_slope = 0.0;
  double fitted_mixing_scale_rate = 0.0;
  double lambda_max_integral = 0.0;
  double lambda_max_stderr = 0.0;
  double grad_l1_average = 0.0;
  double ratio_mixing = 0.0;
  double ratio_regularity = 0.0;
  bool pass_direction = false;

  int resolution = 0;
  double burn_in = 0.0;
  std::vector<double> l2_norm;
  /// log(2 + L2/H^-1) L2^2 / log_sobolev per time.
  std::vector<double> c_obs;
  LinearFit c_obs_trend;
  bool c_obs_growth_significant = false;
  bool h_minus_one_strictly_decreasing = false;  // after burn-in
  bool mixing_scale_non_increasing = false;      // after burn-in
  GridField final_grid;
};

MixingReport run_mixing(const Config& config);

struct RegularityReport {
  MixingReport coarse;  // resolution N
  MixingReport fine;    // resolution 2N
  double slope_relative_change = 0.0;
  bool slope_stable = false;
  bool pass = false;
};

RegularityReport run_regularity(const Config& config);

inline constexpr double kResolutionStability = 0.2;
inline constexpr double kTrendSignificance = 0.05;

nlohmann::json to_json(const LyapunovRun& run);
nlohmann::json to_json(const RuelleReport& report);
nlohmann::json to_json(const MixingReport& report);
nlohmann::json to_json(const RegularityReport& report);
nlohmann::json to_json(const EntropyEstimate& estimate);

}  // namespace ergomix
