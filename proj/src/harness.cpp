#include "ergomix/harness.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "ergomix/errors.hpp"
#include "ergomix/flow.hpp"
#include "ergomix/rng.hpp"

namespace ergomix {
namespace {

constexpr double kIncompressibleSum = 1e-3 * 2;

double ratio(double numerator, double lambda) {
  if (lambda > 0.0) return numerator / lambda;
  return numerator == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

bool strictly_decreasing_after(const std::vector<double>& t, const std::vector<double>& v,
                               double burn_in) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (t[i - 1] >= burn_in && !(v[i] < v[i - 1])) return false;
  }
  return true;
}

bool non_increasing_after(const std::vector<double>& t, const std::vector<double>& v,
                          double burn_in) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (t[i - 1] >= burn_in && v[i] > v[i - 1]) return false;
  }
  return true;
}

LyapunovReport flow_lyapunov(const Config& config, const VelocityField& field) {
  return ensemble_spectrum(time_one_map(field, config.steps_per_unit), config.lyapunov_samples,
                           config.lyapunov_n, derive_seed(config.seed, kStreamLyapunov));
}

MixingReport mixing_pipeline(const Config& config, const VelocityField& field,
                             const LyapunovReport& lyap, double grad_avg, int resolution) {
  const InitialDatum datum = make_initial(config);
  const auto radii = default_mixing_radii(resolution, config.mixing_radii);
  const std::uint64_t ls_seed = derive_seed(config.seed, kStreamLogSobolev);

  MixingReport r;
  r.resolution = resolution;
  r.burn_in = config.burn_in_fraction * config.horizon;
  auto& s = r.series;
  for (const GridField& g :
       sample_scalar_series(field, datum, config.horizon, resolution, config.steps_per_unit)) {
    const double h = h_minus_one(g);
    const double ls = log_sobolev(g, config.shell_samples, ls_seed);
    const double l2 = g.l2_norm();
    s.times.push_back(g.time);
    s.h_minus_one.push_back(h);
    s.log_sobolev.push_back(ls);
    s.mixing_scale.push_back(mixing_scale(g, config.kappa, radii));
    r.l2_norm.push_back(l2);
    r.c_obs.push_back(std::log(2.0 + l2 / h) * l2 * l2 / ls);
    if (g.time == config.horizon) r.final_grid = g;
  }
  s.metadata = {{"field", field.describe()},
                {"datum", datum.describe()},
                {"resolution", resolution},
                {"horizon", config.horizon},
                {"kappa", config.kappa},
                {"steps_per_unit", config.steps_per_unit},
                {"shell_samples", config.shell_samples},
                {"mixing_radii", radii},
                {"burn_in", r.burn_in},
                {"seed", config.seed}};

  r.fitted_h_minus_one_rate = fit_exponential_rate(s.times, s.h_minus_one, r.burn_in);
  r.fitted_log_sobolev_slope = fit_line(s.times, s.log_sobolev, r.burn_in).slope;
  r.fitted_mixing_scale_rate = fit_exponential_rate(s.times, s.mixing_scale, r.burn_in);
  r.lambda_max_integral = lyap.lambda_max_integral;
  r.lambda_max_stderr = lyap.stderr_[0];
  r.grad_l1_average = grad_avg;
  r.ratio_mixing = ratio(r.fitted_h_minus_one_rate, r.lambda_max_integral);
  r.ratio_regularity = ratio(r.fitted_log_sobolev_slope, r.lambda_max_integral);
  r.pass_direction = r.fitted_h_minus_one_rate >= 0.0 && r.fitted_log_sobolev_slope >= 0.0 &&
                     std::isfinite(r.ratio_mixing) && std::isfinite(r.ratio_regularity);
  r.c_obs_trend = fit_line(s.times, r.c_obs, r.burn_in);
  r.c_obs_growth_significant = r.c_obs_trend.p_value_growth < kTrendSignificance;
  r.h_minus_one_strictly_decreasing = strictly_decreasing_after(s.times, s.h_minus_one, r.burn_in);
  r.mixing_scale_non_increasing = non_increasing_after(s.times, s.mixing_scale, r.burn_in);
  return r;
}

}  // namespace

LinearFit fit_line(std::span<const double> times, std::span<const double> values,
                   double burn_in) {
  if (times.size() != values.size()) throw InvalidArgument("times and values differ in length");
  std::vector<double> t, v;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= burn_in) {
      if (!std::isfinite(values[i])) throw InvalidArgument("values must be finite");
      t.push_back(times[i]);
      v.push_back(values[i]);
    }
  }
  if (t.size() < 4) {
    throw InvalidArgument("fit needs >= 4 points after burn-in, got " + std::to_string(t.size()));
  }
  const double n = static_cast<double>(t.size());
  // centre on the first value so constant data gives an exact zero
  const double v0 = v.front();
  double tm = 0.0, vm = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tm += t[i];
    vm += v[i] - v0;
  }
  tm /= n;
  vm /= n;
  double stt = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    stv += (t[i] - tm) * (v[i] - v0 - vm);
  }
  if (!(stt > 0.0)) throw InvalidArgument("fit needs distinct times");
  LinearFit fit;
  fit.points = static_cast<int>(t.size());
  fit.slope = stv / stt;
  double ssr = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = (v[i] - v0 - vm) - fit.slope * (t[i] - tm);
    ssr += e * e;
  }
  const double dof = n - 2.0;
  fit.slope_stderr = std::sqrt(ssr / dof / stt);
  if (fit.slope_stderr > 0.0) {
    const boost::math::students_t dist(dof);
    fit.p_value_growth = boost::math::cdf(boost::math::complement(dist, fit.slope / fit.slope_stderr));
  } else {
    fit.p_value_growth = fit.slope > 0.0 ? 0.0 : 1.0;
  }
  return fit;
}

double fit_exponential_rate(std::span<const double> times, std::span<const double> values,
                            double burn_in) {
  std::vector<double> y(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (times[i] < burn_in) continue;
    if (!(values[i] > 0.0)) throw InvalidArgument("exponential fit needs positive values");
    y[i] = -std::log(values[i]);
  }
  return fit_line(times, y, burn_in).slope;
}

LyapunovRun run_lyapunov(const Config& config) {
  LyapunovRun run;
  const auto map = make_map(config);
  run.report = ensemble_spectrum(map, config.lyapunov_samples, config.lyapunov_n,
                                 derive_seed(config.seed, kStreamLyapunov));
  for (const auto& e : run.report.per_sample_exponents) {
    run.max_exponent_sum = std::fmax(run.max_exponent_sum, std::fabs(e[0] + e[1]));
  }
  run.pass = run.max_exponent_sum <= kIncompressibleSum;
  if (const VelocityField* f = map.field()) {
    run.grad_l1_average = grad_l1_time_average(*f, config.quadrature);
    run.bound_gap = *run.grad_l1_average - run.report.lambda_max_integral;
    run.pass = run.pass && *run.bound_gap >= -3.0 * run.report.stderr_[0];
  }
  return run;
}

RuelleReport run_ruelle(const Config& config) {
  const auto map = make_map(config);
  const Partition partition(config.level);
  RuelleReport r;
  r.map = map.describe();
  r.entropy = entropy_rate(map, partition, config.n, config.samples,
                           derive_seed(config.seed, kStreamEntropy));
  r.probes_per_cell = config.probes;
  r.nu_log_bound_value =
      nu_log_bound(map, partition, config.probes, derive_seed(config.seed, kStreamNu));
  r.lyapunov = ensemble_spectrum(map, config.lyapunov_samples, config.lyapunov_n,
                                 derive_seed(config.seed, kStreamLyapunov));
  r.entropy_estimate = r.entropy.rate;
  r.entropy_bias_bound = r.entropy.bias_bound;
  r.sum_positive_exponents = r.lyapunov.sum_positive;
  r.stderr_ = r.lyapunov.sum_positive_stderr;
  r.pass = r.entropy_estimate - r.entropy_bias_bound <= r.sum_positive_exponents + 3.0 * r.stderr_;
  return r;
}

MixingReport run_mixing(const Config& config) {
  const VelocityField field = make_field(config);
  const LyapunovReport lyap = flow_lyapunov(config, field);
  const double grad = grad_l1_time_average(field, config.quadrature);
  return mixing_pipeline(config, field, lyap, grad, config.resolution);
}

RegularityReport run_regularity(const Config& config) {
  const VelocityField field = make_field(config);
  const LyapunovReport lyap = flow_lyapunov(config, field);
  const double grad = grad_l1_time_average(field, config.quadrature);
  RegularityReport r;
  r.coarse = mixing_pipeline(config, field, lyap, grad, config.resolution);
  r.fine = mixing_pipeline(config, field, lyap, grad, 2 * config.resolution);
  const double a = r.coarse.fitted_log_sobolev_slope, b = r.fine.fitted_log_sobolev_slope;
  const double scale = std::fmax(std::fabs(a), std::fabs(b));
  r.slope_relative_change = scale > 0.0 ? std::fabs(a - b) / scale : 0.0;
  r.slope_stable = r.slope_relative_change <= kResolutionStability;
  r.pass = std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b >= 0.0 && r.slope_stable;
  return r;
}

nlohmann::json to_json(const EntropyEstimate& e) {
  return {{"rate", e.rate},
          {"bias_bound", e.bias_bound},
          {"block_rate", e.block_rate},
          {"depth", e.depth},
          {"distinct_codes", e.distinct_codes},
          {"sample_count", e.sample_count},
          {"block_entropies", e.block_entropies},
          {"codes_per_depth", e.codes_per_depth},
          {"sample_guard", kEntropySampleGuard}};
}

nlohmann::json to_json(const LyapunovRun& run) {
  nlohmann::json j = to_json(run.report);
  j["max_exponent_sum"] = run.max_exponent_sum;
  if (run.grad_l1_average) j["grad_l1_average"] = *run.grad_l1_average;
  if (run.bound_gap) j["top_exponent_bound_gap"] = *run.bound_gap;
  j["pass"] = run.pass;
  return j;
}

nlohmann::json to_json(const RuelleReport& r) {
  return {{"entropy_estimate", r.entropy_estimate},
          {"entropy_bias_bound", r.entropy_bias_bound},
          {"sum_positive_exponents", r.sum_positive_exponents},
          {"stderr", r.stderr_},
          {"nu_log_bound_value", r.nu_log_bound_value},
          {"pass", r.pass},
          {"map", r.map},
          {"probes_per_cell", r.probes_per_cell},
          {"entropy", to_json(r.entropy)},
          {"lyapunov", to_json(r.lyapunov)}};
}

nlohmann::json to_json(const MixingReport& r) {
  nlohmann::json series = r.series.sidecar();
  series["times"] = r.series.times;
  series["h_minus_one"] = r.series.h_minus_one;
  series["log_sobolev"] = r.series.log_sobolev;
  series["mixing_scale"] = r.series.mixing_scale;
  return {{"series", series},
          {"fitted_h_minus_one_rate", r.fitted_h_minus_one_rate},
          {"fitted_log_sobolev_slope", r.fitted_log_sobolev_slope},
          {"fitted_mixing_scale_rate", r.fitted_mixing_scale_rate},
          {"lambda_max_integral", r.lambda_max_integral},
          {"lambda_max_stderr", r.lambda_max_stderr},
          {"grad_l1_average", r.grad_l1_average},
          {"ratio_mixing", r.ratio_mixing},
          {"ratio_regularity", r.ratio_regularity},
          {"pass_direction", r.pass_direction},
          {"resolution", r.resolution},
          {"burn_in", r.burn_in},
          {"l2_norm", r.l2_norm},
          {"c_obs", r.c_obs},
          {"c_obs_slope", r.c_obs_trend.slope},
          {"c_obs_slope_stderr", r.c_obs_trend.slope_stderr},
          {"c_obs_p_value_growth", r.c_obs_trend.p_value_growth},
          {"c_obs_growth_significant", r.c_obs_growth_significant},
          {"h_minus_one_strictly_decreasing", r.h_minus_one_strictly_decreasing},
          {"mixing_scale_non_increasing", r.mixing_scale_non_increasing}};
}

nlohmann::json to_json(const RegularityReport& r) {
  return {{"coarse", to_json(r.coarse)},
          {"fine", to_json(r.fine)},
          {"slope_relative_change", r.slope_relative_change},
          {"slope_stable", r.slope_stable},
          {"pass", r.pass}};
}

}  // namespace ergomix
