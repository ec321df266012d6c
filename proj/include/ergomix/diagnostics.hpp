#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergomix/maps.hpp"
#include "ergomix/scalar.hpp"

namespace ergomix {

/// sqrt(sum_{k != 0} |k|^-2 |rho_hat(k)|^2) with rho_hat(k) = integral of
/// rho e^{-2 pi i k.x}, evaluated from the DFT of the mean-free grid.
double h_minus_one(const GridField& grid);

/// Squared homogeneous log-Sobolev norm: integral over 1/N <= |h| <= 1/5 of
/// mean_x (rho(x+h) - rho(x))^2 / |h|^2 dh. Node shifts within 6 nodes are
/// summed exactly as a lattice sum. Beyond that the weight is flat in
/// (log|h|, angle); shell_samples / 4 jittered log-shells are each probed at 4
/// equally spaced angles, and rho(x+h) uses the nearest node.
double log_sobolev(const GridField& grid, int shell_samples, std::uint64_t seed);

/// `count` radii geometrically spaced from 1/N to 1/2.
std::vector<double> default_mixing_radii(int resolution, int count);

/// Smallest scanned radius r* such that every ball average (balls = nodes within
/// torus distance r of a node) satisfies |avg| <= kappa * sup_norm for all
/// scanned r >= r*. Returns max(radii) if the largest radius already fails.
/// sup_norm <= 0 means "use grid.datum.sup_norm".
double mixing_scale(const GridField& grid, double kappa, std::span<const double> radii,
                    double sup_norm = 0.0);

/// -sum w log w with 0 log 0 = 0.
double partition_entropy(std::span<const double> weights);

/// Dyadic partition of T^2 into squares of side 2^-level.
struct Partition {
  int level = 0;

  explicit Partition(int level);
  std::uint32_t cell_count() const { return 1u << (2 * level); }
  std::uint32_t label(double x, double y) const;
  std::uint32_t label(const TorusPoint& p) const { return label(p.x(), p.y()); }
};

struct EntropyEstimate {
  /// H_m - H_{m-1} at the deepest depth m <= n that passes the sample guard.
  double rate = 0.0;
  /// Plug-in upper bound on the downward bias of `rate`: (K_m - 1) / (2 M).
  double bias_bound = 0.0;
  /// H_n / n (block estimator, undersampled for large n).
  double block_rate = 0.0;
  int depth = 0;
  long long distinct_codes = 0;
  long long sample_count = 0;
  std::vector<double> block_entropies;  // H_1 .. H_n
  std::vector<long long> codes_per_depth;
};

inline constexpr int kEntropySampleGuard = 8;

/// Entropy rate of map w.r.t. the partition from sampled orbit codes. Throws
/// UndersampledError (with the sample count needed) when even depth 2 has
/// fewer than kEntropySampleGuard samples per observed code.
EntropyEstimate entropy_rate(const MeasurePreservingMap& map, const Partition& partition, int n,
                             long long sample_count, std::uint64_t seed);

/// Cell-averaged log of the number of partition cells hit by forward images of
/// probes_per_cell uniform probes in each cell.
double nu_log_bound(const MeasurePreservingMap& map, const Partition& partition,
                    int probes_per_cell, std::uint64_t seed);

using Observable = std::function<double(const TorusPoint&)>;

/// max over 1 <= n <= horizon of (1/n) sum_{i<n} |g|(T^i x).
double maximal_ergodic(const MeasurePreservingMap& map, const Observable& g, const TorusPoint& x,
                       int horizon);

struct MaximalTail {
  std::vector<double> thresholds;
  std::vector<double> tail;   // fraction of samples with g* > threshold
  std::vector<double> bound;  // g_l1 / threshold
  int samples = 0;
  int horizon = 0;
};

/// Empirical distribution tail of g* over uniform samples.
MaximalTail maximal_ergodic_tail(const MeasurePreservingMap& map, const Observable& g,
                                 double g_l1, std::span<const double> thresholds, int samples,
                                 int horizon, std::uint64_t seed);

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<double> h_minus_one;
  std::vector<double> log_sobolev;
  std::vector<double> mixing_scale;
  nlohmann::json metadata = nlohmann::json::object();

  std::string to_csv() const;
  nlohmann::json sidecar() const;
};

}  // namespace ergomix
