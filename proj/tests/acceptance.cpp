#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ergomix/cli.hpp"
#include "ergomix/diagnostics.hpp"
#include "ergomix/flow.hpp"
#include "ergomix/harness.hpp"
#include "ergomix/io.hpp"
#include "ergomix/lyapunov.hpp"
#include "ergomix/rng.hpp"
#include "ergomix/scalar.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ergomix;
namespace fs = std::filesystem;

namespace {

namespace tol {
constexpr double kCatExponent = 1e-9;
constexpr double kPesinRelative = 0.15;
constexpr double kSigmas = 3.0;
constexpr double kBakerExponent = 1e-9;
constexpr double kShearGradient = 1e-3;
constexpr double kShearExponent = 0.05;
constexpr double kDet = 1e-6;
constexpr double kExponentSum = 1e-3;
constexpr double kHMinusOne = 1e-6;
constexpr double kLogSobolevRelative = 0.05;
constexpr double kRatioStability = 0.2;
constexpr double kGrowthConfidence = 0.05;
}  // namespace tol

const double kCatExponent = std::log((3.0 + std::sqrt(5.0)) / 2.0);
constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << ']';
    }
  }
};

Config config(Experiment e) {
  Config c;
  c.experiment = e;
  c.seed = kSeed;
  return c;
}

VelocityFieldSpec steady_shear() { return {FieldKind::steady_shear, 1.0, {0.0, 0.0}, 1}; }

void cat_ground_truth(Outcome& o) {
  Rng rng(kSeed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto e = finite_time_spectrum(MeasurePreservingMap::cat(), {rng.uniform(), rng.uniform()}, 30);
    worst = std::fmax(worst, std::fmax(std::fabs(e[0] - kCatExponent), std::fabs(e[1] + kCatExponent)));
  }
  o.detail << "max |lambda -+ 0.962424| = " << worst;
  o.require(worst <= tol::kCatExponent, "exponent error");
}

void ruelle_cat(Outcome& o) {
  auto c = config(Experiment::ruelle);
  c.map = MapKind::cat;
  c.level = 4;
  c.n = 8;
  c.samples = 1000000;
  const auto r = run_ruelle(c);
  const double s = r.sum_positive_exponents;
  o.detail << "h = " << r.entropy_estimate << " (depth " << r.entropy.depth << "), sum lambda+ = " << s
           << ", sigma = " << r.stderr_;
  o.require(r.entropy_estimate <= s + tol::kSigmas * r.stderr_, "Ruelle inequality");
  o.require(std::fabs(r.entropy_estimate - s) <= tol::kPesinRelative * s, "Pesin within 15%");
}

void baker(Outcome& o) {
  auto c = config(Experiment::ruelle);
  c.map = MapKind::baker;
  c.lyapunov_n = 20;
  const auto r = run_ruelle(c);
  const auto& e = r.lyapunov.mean_exponents;
  const double log2 = std::log(2.0);
  double worst = 0.0;
  for (const auto& s : r.lyapunov.per_sample_exponents) {
    worst = std::fmax(worst, std::fmax(std::fabs(s[0] - log2), std::fabs(s[1] + log2)));
  }
  o.detail << "lambda = (" << e[0] << ", " << e[1] << "), max error " << worst
           << ", h = " << r.entropy_estimate;
  o.require(worst <= tol::kBakerExponent, "exponents");
  o.require(std::fabs(r.entropy_estimate - log2) <= tol::kPesinRelative * log2, "entropy");
  o.require(r.pass, "Ruelle gate");
}

// Shared by criteria 4 and 5.
std::vector<std::pair<std::string, LyapunovRun>> catalog_runs() {
  std::vector<std::pair<std::string, LyapunovRun>> runs;
  for (const auto& spec : default_field_catalog()) {
    auto c = config(Experiment::lyapunov);
    c.map = MapKind::time_one_flow;
    c.field = spec;
    c.lyapunov_samples = 200;
    c.lyapunov_n = 50;
    c.steps_per_unit = 128;
    runs.emplace_back(make_field(spec).describe(), run_lyapunov(c));
  }
  return runs;
}

void top_exponent_bound(Outcome& o, const std::vector<std::pair<std::string, LyapunovRun>>& runs) {
  for (const auto& [name, run] : runs) {
    const double gap = run.bound_gap.value_or(NAN);
    o.detail << name << " gap " << gap << "; ";
    o.require(gap >= -tol::kSigmas * run.report.stderr_[0], "gap for " + name);
  }
  auto c = config(Experiment::lyapunov);
  c.map = MapKind::time_one_flow;
  c.field = steady_shear();
  c.lyapunov_samples = 200;
  c.lyapunov_n = 200;
  c.steps_per_unit = 64;
  const auto shear = run_lyapunov(c);
  const double grad = shear.grad_l1_average.value_or(NAN);
  o.detail << "shear grad " << grad << ", lambda " << shear.report.lambda_max_integral;
  o.require(std::fabs(grad - 4.0) <= tol::kShearGradient, "shear gradient average");
  o.require(shear.report.lambda_max_integral <= tol::kShearExponent, "shear exponent");
}

void volume_preservation(Outcome& o, const std::vector<std::pair<std::string, LyapunovRun>>& runs) {
  Rng rng(kSeed);
  double worst_det = 0.0;
  for (auto spec : default_field_catalog()) {
    for (double amp : {1.0, 2.0}) {
      spec.amplitude = amp;
      const auto field = make_field(spec);
      for (int i = 0; i < 1000; ++i) {
        const TorusPoint x(rng.uniform(), rng.uniform());
        const double t = rng.uniform(0.0, 10.0);
        const int steps = std::max(1, static_cast<int>(std::lround(t * 256)));
        worst_det = std::fmax(worst_det, std::fabs(std::expm1(tangent_log_det(field, x, 0.0, t, steps))));
      }
    }
  }
  double worst_sum = 0.0;
  for (const auto& [name, run] : runs) worst_sum = std::fmax(worst_sum, run.max_exponent_sum);
  o.detail << "max |det - 1| = " << worst_det << ", max |lambda1 + lambda2| = " << worst_sum;
  o.require(worst_det <= tol::kDet, "determinant");
  o.require(worst_sum <= tol::kExponentSum, "exponent sum");
}

void h_minus_one_values(Outcome& o) {
  const auto zero = make_field({FieldKind::zero, 0.0, {0.0, 0.0}, 1});
  const double a = h_minus_one(sample_scalar(zero, make_initial(DatumKind::sinusoid, {1, 0}), 0.0, 256, 1));
  const double b = h_minus_one(sample_scalar(zero, make_initial(DatumKind::sinusoid, {2, 0}), 0.0, 256, 1));
  o.detail << "sin 2pi x -> " << a << ", sin 4pi x -> " << b;
  o.require(std::fabs(a - std::sqrt(0.5)) <= tol::kHMinusOne, "sin 2pi x");
  o.require(std::fabs(b - std::sqrt(0.5) / 2.0) <= tol::kHMinusOne, "sin 4pi x");
}

void log_sobolev_brute_force(Outcome& o) {
  const auto zero = make_field({FieldKind::zero, 0.0, {0.0, 0.0}, 1});
  const auto alt = make_field({FieldKind::alternating_shear, 1.0, {0.0, 0.0}, 1});
  const std::vector<std::pair<std::string, GridField>> grids{
      {"sinusoid", sample_scalar(zero, make_initial(DatumKind::sinusoid, {1, 0}), 0.0, 64, 1)},
      {"checkerboard", sample_scalar(zero, make_initial(DatumKind::checkerboard, {1, 0}, 2), 0.0, 64, 1)},
      {"stirred", sample_scalar(alt, make_initial(DatumKind::checkerboard, {1, 0}, 1), 1.0, 64, 64)}};
  for (const auto& [name, g] : grids) {
    const double est = log_sobolev(g, 256, kSeed);
    const double brute = oracle::log_sobolev_brute(g);
    const double rel = std::fabs(est - brute) / brute;
    o.detail << name << ' ' << est << " vs " << brute << " (" << rel << "); ";
    o.require(rel <= tol::kLogSobolevRelative, name);
  }
}

Config mixing_config() {
  auto c = config(Experiment::regularity);
  c.field = {FieldKind::alternating_shear, 1.0, {0.0, 0.0}, 1};
  c.datum = {DatumKind::checkerboard, 2, {1, 0}};
  c.horizon = 20;
  c.resolution = 512;
  return c;
}

bool non_increasing_after(const std::vector<double>& t, const std::vector<double>& v, double burn_in,
                          bool strict) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (t[i - 1] < burn_in) continue;
    if (strict ? !(v[i] < v[i - 1]) : v[i] > v[i - 1]) return false;
  }
  return true;
}

void mixing_direction(Outcome& o, const RegularityReport& r) {
  const auto& m = r.coarse;
  const auto& s = m.series;
  const bool h_decreasing = non_increasing_after(s.times, s.h_minus_one, m.burn_in, true);
  const bool scale_monotone = non_increasing_after(s.times, s.mixing_scale, m.burn_in, false);
  const double change = std::fabs(r.fine.ratio_mixing - m.ratio_mixing) / std::fabs(m.ratio_mixing);
  o.detail << "beta " << m.fitted_h_minus_one_rate << ", ratio " << m.ratio_mixing << " (N=1024 "
           << r.fine.ratio_mixing << ", change " << change << ")";
  o.require(h_decreasing, "H^-1 strictly decreasing after burn-in");
  o.require(m.fitted_h_minus_one_rate > 0.0, "beta > 0");
  o.require(std::isfinite(m.ratio_mixing) && change <= tol::kRatioStability, "ratio stable");
  o.require(scale_monotone, "mixing scale non-increasing after burn-in");
}

void regularity_slope(Outcome& o, const RegularityReport& r) {
  const auto& m = r.coarse;
  o.detail << "slope " << m.fitted_log_sobolev_slope << ", C_obs trend " << m.c_obs_trend.slope
           << " (p = " << m.c_obs_trend.p_value_growth << ")";
  o.require(std::isfinite(m.fitted_log_sobolev_slope), "finite slope");
  o.require(m.c_obs_trend.p_value_growth >= tol::kGrowthConfidence, "no significant C_obs growth");
}

void maximal_ergodic_weak_l1(Outcome& o) {
  const Observable g = [](const TorusPoint& x) { return x.x() < 0.5 && x.y() < 0.5 ? 1.0 : 0.0; };
  const std::vector<double> thresholds{0.3, 0.5, 0.8};
  const auto tail = maximal_ergodic_tail(MeasurePreservingMap::cat(), g, 0.25, thresholds, 10000, 64, kSeed);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    o.detail << "mu(g* > " << thresholds[i] << ") = " << tail.tail[i] << " <= " << tail.bound[i] << "; ";
    o.require(tail.tail[i] <= tail.bound[i], "tail at " + std::to_string(thresholds[i]));
  }
}

// Every run writes to the same directory so the echoed config is comparable.
std::map<std::string, std::string> run_outputs(const fs::path& config_path, const fs::path& dir) {
  fs::remove_all(dir);
  std::ostringstream out, err;
  run_cli({"run", config_path.string(), "--output", dir.string()}, out, err);
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] = read_text_file(entry.path());
  }
  return files;
}

void determinism(Outcome& o) {
  const auto root = fs::temp_directory_path() / "ergomix_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::map<std::string, std::string> configs{
      {"ruelle", "experiment = ruelle\nseed = 5\nsamples = 200000\nlyapunov_samples = 100\n"
                 "lyapunov_n = 20\n[map]\nkind = cat\n"},
      {"lyapunov", "experiment = lyapunov\nseed = 5\nlyapunov_samples = 64\nlyapunov_n = 20\n"
                   "steps_per_unit = 64\n[map]\nkind = time_one_flow\n[field]\nkind = cellular\n"},
      {"mixing", "experiment = mixing\nseed = 5\nresolution = 64\nhorizon = 6\nsteps_per_unit = 32\n"
                 "lyapunov_samples = 32\nlyapunov_n = 10\n[field]\nkind = alternating_shear\n"},
      {"regularity", "experiment = regularity\nseed = 5\nresolution = 32\nhorizon = 4\n"
                     "steps_per_unit = 16\nlyapunov_samples = 16\nlyapunov_n = 5\n"}};
  int compared = 0;
  for (const auto& [name, text] : configs) {
    const auto path = root / (name + ".toml");
    write_file_atomic(path, text);
    std::vector<std::map<std::string, std::string>> results;
    for (int workers : {1, 1, 4}) {
      test_support::ThreadLimit limit(workers);
      results.push_back(run_outputs(path, root / name));
    }
    const bool same = !results[0].empty() && results[0] == results[1] && results[0] == results[2];
    compared += static_cast<int>(results[0].size());
    o.require(same, name + " outputs differ");
  }
  o.detail << compared << " files compared across 3 runs each";
  fs::remove_all(root);
}

bool report(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main() {
  int failed = 0;
  auto tally = [&](bool ok) { failed += ok ? 0 : 1; };
  tally(report(1, "cat map Lyapunov ground truth", cat_ground_truth));
  tally(report(2, "Ruelle inequality and Pesin equality", ruelle_cat));
  tally(report(3, "baker map", baker));
  std::vector<std::pair<std::string, LyapunovRun>> runs;
  try {
    runs = catalog_runs();
  } catch (const std::exception& e) {
    std::printf("catalog Lyapunov runs failed: %s\n", e.what());
  }
  tally(report(4, "top-exponent bound", [&](Outcome& o) {
    o.require(!runs.empty(), "catalog runs");
    top_exponent_bound(o, runs);
  }));
  tally(report(5, "volume preservation", [&](Outcome& o) {
    o.require(!runs.empty(), "catalog runs");
    volume_preservation(o, runs);
  }));
  tally(report(6, "H^-1 Fourier values", h_minus_one_values));
  tally(report(7, "log-Sobolev estimator vs brute force", log_sobolev_brute_force));
  RegularityReport mixing;
  bool have_mixing = false;
  try {
    mixing = run_regularity(mixing_config());
    have_mixing = true;
  } catch (const std::exception& e) {
    std::printf("mixing run failed: %s\n", e.what());
  }
  tally(report(8, "mixing direction", [&](Outcome& o) {
    o.require(have_mixing, "mixing run");
    if (have_mixing) mixing_direction(o, mixing);
  }));
  tally(report(9, "regularity slope", [&](Outcome& o) {
    o.require(have_mixing, "mixing run");
    if (have_mixing) regularity_slope(o, mixing);
  }));
  tally(report(10, "maximal ergodic weak L1", maximal_ergodic_weak_l1));
  tally(report(11, "determinism across worker counts", determinism));
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
