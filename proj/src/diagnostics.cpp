#include "ergomix/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "ergomix/errors.hpp"
#include "ergomix/fft.hpp"
#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/parallel.hpp"
#include "ergomix/rng.hpp"

namespace ergomix {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSobolevOuterRadius = 0.2;
constexpr double kBallSlack = 1e-12;
constexpr int kAnglesPerShell = 4;
constexpr int kLogSobolevLatticeRadius = 6;
constexpr int kMaxPartitionLevel = 15;

int wrap_index(long long i, int n) {
  const long long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

/// mean_x (rho(x + s) - rho(x))^2 for the node shift s = (sx, sy).
double shifted_mean_sq_diff(const GridField& g, int sx, int sy,
                            const kernels::KernelTable& k) {
  const int n = g.resolution;
  sx = wrap_index(sx, n);
  sy = wrap_index(sy, n);
  const double* v = g.values.data();
  double total = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double* a = v + static_cast<std::size_t>(iy) * n;
    const double* b = v + static_cast<std::size_t>(wrap_index(iy + sy, n)) * n;
    total += k.sum_sq_diff(a, b + sx, static_cast<std::size_t>(n - sx));
    total += k.sum_sq_diff(a + (n - sx), b, static_cast<std::size_t>(sx));
  }
  return total / (static_cast<double>(n) * n);
}

void check_grid(const GridField& g) {
  if (g.resolution < 16) throw InvalidArgument("grid resolution must be >= 16");
  if (g.values.size() != static_cast<std::size_t>(g.resolution) * g.resolution) {
    throw InvalidArgument("grid values do not match its resolution");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double h_minus_one(const GridField& grid) {
  check_grid(grid);
  const int n = grid.resolution;
  const double mean = grid.mean();
  std::vector<double> centred(grid.values.size());
  for (std::size_t i = 0; i < centred.size(); ++i) centred[i] = grid.values[i] - mean;
  RealFft2d fft(n);
  const auto spec = fft.forward(centred);
  const int cols = fft.spectrum_columns();
  const double scale = 1.0 / (static_cast<double>(n) * n);
  double sum = 0.0;
  for (int iy = 0; iy < n; ++iy) {
    const double ky = iy <= n / 2 ? iy : iy - n;
    for (int jx = 0; jx < cols; ++jx) {
      if (iy == 0 && jx == 0) continue;
      // columns 1 .. n/2-1 stand for +-k
      const double weight = (jx == 0 || jx == n / 2) ? 1.0 : 2.0;
      const double k2 = ky * ky + static_cast<double>(jx) * jx;
      sum += weight * std::norm(spec[static_cast<std::size_t>(iy) * cols + jx] * scale) / k2;
    }
  }
  return std::sqrt(sum);
}

double log_sobolev(const GridField& grid, int shell_samples, std::uint64_t seed) {
  check_grid(grid);
  if (shell_samples < 32) throw InvalidArgument("shell_samples must be >= 32");
  const int n = grid.resolution;
  const double outer = kLogSobolevOuterRadius * n;
  const double inner = std::fmin(static_cast<double>(kLogSobolevLatticeRadius), outer);

  // Exact lattice stratum for 1 <= |h| <= inner (in nodes), half plane by D(h) = D(-h).
  std::vector<std::array<int, 2>> shifts;
  std::vector<double> weights;
  for (int dy = 0; dy <= kLogSobolevLatticeRadius; ++dy) {
    for (int dx = -kLogSobolevLatticeRadius; dx <= kLogSobolevLatticeRadius; ++dx) {
      if (dy == 0 && dx <= 0) continue;
      const double r2 = dx * dx + dy * dy;
      if (r2 > inner * inner) continue;
      shifts.push_back({dx, dy});
      weights.push_back(2.0 / r2);
    }
  }

  // Jittered log-shells over the annulus, each probed at kAnglesPerShell
  // equally spaced angles under a random rotation; angles cover [0, pi).
  const double u0 = std::log(inner), u1 = std::log(outer);
  if (u1 > u0) {
    const std::size_t shells = static_cast<std::size_t>(shell_samples) / kAnglesPerShell;
    const double w = 2.0 * kPi * (u1 - u0) / static_cast<double>(shells * kAnglesPerShell);
    Rng rng(seed);
    for (std::size_t i = 0; i < shells; ++i) {
      const double r = std::exp(u0 + (u1 - u0) * (static_cast<double>(i) + rng.uniform()) / shells);
      const double theta0 = kPi * rng.uniform() / kAnglesPerShell;
      for (int j = 0; j < kAnglesPerShell; ++j) {
        const double theta = theta0 + kPi * j / kAnglesPerShell;
        shifts.push_back({static_cast<int>(std::lround(r * std::cos(theta))),
                          static_cast<int>(std::lround(r * std::sin(theta)))});
        weights.push_back(w);
      }
    }
  }

  const auto& k = kernels::active_kernels();
  std::vector<double> d(shifts.size());
  parallel_for(shifts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) d[i] = shifted_mean_sq_diff(grid, shifts[i][0], shifts[i][1], k);
  }, 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) sum += weights[i] * d[i];
  return sum;
}

std::vector<double> default_mixing_radii(int resolution, int count) {
  if (resolution < 2) throw InvalidArgument("resolution must be >= 2");
  if (count < 2) throw InvalidArgument("mixing radius count must be >= 2");
  const double lo = std::log(1.0 / resolution), hi = std::log(0.5);
  std::vector<double> r(count);
  for (int i = 0; i < count; ++i) r[i] = std::exp(lo + (hi - lo) * i / (count - 1));
  r.back() = 0.5;
  return r;
}

double mixing_scale(const GridField& grid, double kappa, std::span<const double> radii,
                    double sup_norm) {
  check_grid(grid);
  if (radii.empty()) throw InvalidArgument("radii must not be empty");
  if (!(kappa > 0.0 && kappa < 1.0)) throw InvalidArgument("kappa must be in (0, 1)");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || radii[i] > 0.5) throw InvalidArgument("radii must be in (0, 1/2]");
    if (i > 0 && radii[i] <= radii[i - 1]) throw InvalidArgument("radii must be ascending");
  }
  const double sup = sup_norm > 0.0 ? sup_norm : grid.datum.sup_norm;
  const double limit = kappa * sup + kBallSlack;
  const int n = grid.resolution;
  const std::size_t total = static_cast<std::size_t>(n) * n;

  RealFft2d fft(n);
  const auto rho_hat = fft.forward(grid.values);

  auto holds = [&](double r) {
    const double rn2 = (r * n) * (r * n);
    std::vector<double> ball(total, 0.0);
    double members = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      const double dy = iy <= n / 2 ? iy : iy - n;
      for (int ix = 0; ix < n; ++ix) {
        const double dx = ix <= n / 2 ? ix : ix - n;
        if (dx * dx + dy * dy <= rn2) {
          ball[static_cast<std::size_t>(iy) * n + ix] = 1.0;
          members += 1.0;
        }
      }
    }
    auto prod = fft.forward(ball);
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= rho_hat[i];
    const auto sums = fft.inverse(prod);
    const double norm = 1.0 / (static_cast<double>(total) * members);
    double worst = 0.0;
    for (double s : sums) worst = std::fmax(worst, std::fabs(s * norm));
    return worst <= limit;
  };

  double result = radii.back();
  for (std::size_t j = radii.size(); j-- > 0;) {
    if (!holds(radii[j])) break;
    result = radii[j];
  }
  return result;
}

double partition_entropy(std::span<const double> weights) {
  double total = 0.0, h = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("partition weights must be non-negative");
    total += w;
    if (w > 0.0) h -= w * std::log(w);
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvalidArgument("partition weights must sum to 1");
  return h;
}

Partition::Partition(int lvl) : level(lvl) {
  if (lvl < 0 || lvl > kMaxPartitionLevel) {
    throw InvalidArgument("partition level must be in [0, " + std::to_string(kMaxPartitionLevel) +
                          "]");
  }
}

std::uint32_t Partition::label(double x, double y) const {
  const std::uint32_t side = 1u << level;
  const auto cell = [side](double c) {
    const auto i = static_cast<std::uint32_t>(c * side);
    return i >= side ? side - 1 : i;
  };
  return cell(x) * side + cell(y);
}

EntropyEstimate entropy_rate(const MeasurePreservingMap& map, const Partition& partition, int n,
                             long long sample_count, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (sample_count < 1) throw InvalidArgument("sample_count must be >= 1");
  const auto m_count = static_cast<std::size_t>(sample_count);
  const double m_real = static_cast<double>(sample_count);

  std::vector<double> xs(m_count), ys(m_count);
  Rng rng(seed);
  for (std::size_t i = 0; i < m_count; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
  }

  EntropyEstimate est;
  est.sample_count = sample_count;
  std::vector<std::uint64_t> ids(m_count, 0), keys(m_count), uniq;
  std::vector<long long> counts;
  const std::uint64_t cells = partition.cell_count();
  for (int depth = 1; depth <= n; ++depth) {
    for (std::size_t i = 0; i < m_count; ++i) keys[i] = ids[i] * cells + partition.label(xs[i], ys[i]);
    uniq = keys;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    counts.assign(uniq.size(), 0);
    for (std::size_t i = 0; i < m_count; ++i) {
      ids[i] = static_cast<std::uint64_t>(std::lower_bound(uniq.begin(), uniq.end(), keys[i]) -
                                          uniq.begin());
      ++counts[ids[i]];
    }
    double h = 0.0;
    for (long long c : counts) {
      const double p = static_cast<double>(c) / m_real;
      h -= p * std::log(p);
    }
    est.block_entropies.push_back(h);
    est.codes_per_depth.push_back(static_cast<long long>(uniq.size()));
    if (depth < n) map.apply_batch(xs, ys);
  }

  est.block_rate = est.block_entropies.back() / n;
  const int min_depth = std::min(2, n);
  for (int m = n; m >= min_depth; --m) {
    const long long codes = est.codes_per_depth[m - 1];
    if (sample_count >= kEntropySampleGuard * codes) {
      const double prev = m >= 2 ? est.block_entropies[m - 2] : 0.0;
      est.rate = std::fmax(est.block_entropies[m - 1] - prev, 0.0);
      est.depth = m;
      est.distinct_codes = codes;
      est.bias_bound = static_cast<double>(codes - 1) / (2.0 * m_real);
      return est;
    }
  }
  const long long required = kEntropySampleGuard * est.codes_per_depth[min_depth - 1];
  throw UndersampledError("entropy_rate needs at least " + std::to_string(required) +
                              " samples (" + std::to_string(kEntropySampleGuard) +
                              " per observed code at depth " + std::to_string(min_depth) +
                              "), got " + std::to_string(sample_count),
                          required);
}

double nu_log_bound(const MeasurePreservingMap& map, const Partition& partition,
                    int probes_per_cell, std::uint64_t seed) {
  if (probes_per_cell < 16) throw InvalidArgument("probes_per_cell must be >= 16");
  const std::uint32_t side = 1u << partition.level;
  const std::size_t cells = partition.cell_count();
  const auto probes = static_cast<std::size_t>(probes_per_cell);
  std::vector<double> xs(cells * probes), ys(cells * probes);
  for (std::size_t c = 0; c < cells; ++c) {
    const double cx = static_cast<double>(c / side), cy = static_cast<double>(c % side);
    Rng rng(derive_seed(seed, c));
    for (std::size_t p = 0; p < probes; ++p) {
      xs[c * probes + p] = (cx + rng.uniform()) / side;
      ys[c * probes + p] = (cy + rng.uniform()) / side;
    }
  }
  map.apply_batch(xs, ys);
  std::vector<double> logs(cells);
  parallel_for(cells, [&](std::size_t b, std::size_t e) {
    std::vector<std::uint32_t> labels(probes);
    for (std::size_t c = b; c < e; ++c) {
      for (std::size_t p = 0; p < probes; ++p) {
        labels[p] = partition.label(xs[c * probes + p], ys[c * probes + p]);
      }
      std::sort(labels.begin(), labels.end());
      const auto hit = std::unique(labels.begin(), labels.end()) - labels.begin();
      logs[c] = std::log(static_cast<double>(hit));
    }
  }, 1);
  double sum = 0.0;
  for (double v : logs) sum += v;
  return sum / static_cast<double>(cells);
}

double maximal_ergodic(const MeasurePreservingMap& map, const Observable& g, const TorusPoint& x,
                       int horizon) {
  if (horizon < 1) throw InvalidArgument("horizon must be >= 1");
  double sum = 0.0, best = 0.0;
  TorusPoint p = x;
  for (int i = 0; i < horizon; ++i) {
    sum += std::fabs(g(p));
    best = std::fmax(best, sum / (i + 1));
    if (i + 1 < horizon) p = map.apply(p);
  }
  return best;
}

MaximalTail maximal_ergodic_tail(const MeasurePreservingMap& map, const Observable& g,
                                 double g_l1, std::span<const double> thresholds, int samples,
                                 int horizon, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  std::vector<TorusPoint> starts(static_cast<std::size_t>(samples));
  Rng rng(seed);
  for (auto& s : starts) {
    const double x = rng.uniform();
    s = TorusPoint(x, rng.uniform());
  }
  std::vector<double> gstar(starts.size());
  parallel_for(starts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) gstar[i] = maximal_ergodic(map, g, starts[i], horizon);
  });
  MaximalTail out;
  out.samples = samples;
  out.horizon = horizon;
  for (double lambda : thresholds) {
    if (!(lambda > 0.0)) throw InvalidArgument("thresholds must be positive");
    const auto above = std::count_if(gstar.begin(), gstar.end(), [&](double v) { return v > lambda; });
    out.thresholds.push_back(lambda);
    out.tail.push_back(static_cast<double>(above) / samples);
    out.bound.push_back(g_l1 / lambda);
  }
  return out;
}

std::string DiagnosticSeries::to_csv() const {
  std::string out = "t,h_minus_one,log_sobolev,mixing_scale\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += fmt(times[i]) + ',' + fmt(h_minus_one[i]) + ',' + fmt(log_sobolev[i]) + ',' +
           fmt(mixing_scale[i]) + '\n';
  }
  return out;
}

nlohmann::json DiagnosticSeries::sidecar() const {
  nlohmann::json j = metadata;
  j["columns"] = {"t", "h_minus_one", "log_sobolev", "mixing_scale"};
  j["rows"] = times.size();
  return j;
}

}  // namespace ergomix
