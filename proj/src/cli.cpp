#include "ergomix/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>

#include "ergomix/config.hpp"
#include "ergomix/diagnostics.hpp"
#include "ergomix/errors.hpp"
#include "ergomix/harness.hpp"
#include "ergomix/io.hpp"
#include "ergomix/kernels/dispatch.hpp"
#include "ergomix/parallel.hpp"
#include "ergomix/rng.hpp"

namespace fs = std::filesystem;

namespace ergomix {
namespace {

/// Files produced by one run; nothing touches the disk until all are ready.
using Outputs = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_outputs(const fs::path& dir, const Outputs& outputs) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FileError("cannot create output directory '" + dir.string() + "'");
  for (const auto& [name, content] : outputs) write_file_atomic(dir / name, content);
}

struct DiagnoseOptions {
  double kappa = 1.0 / 3.0;
  int shell_samples = 256;
  int mixing_radii = 40;
  std::uint64_t seed = 0;
};

nlohmann::json diagnose_grid(const GridField& g, const DiagnoseOptions& o) {
  const auto radii = default_mixing_radii(g.resolution, o.mixing_radii);
  return {{"resolution", g.resolution},
          {"time", g.time},
          {"datum", to_json(g.datum)},
          {"source", g.source},
          {"mean", g.mean()},
          {"l2_norm", g.l2_norm()},
          {"h_minus_one", h_minus_one(g)},
          {"log_sobolev", log_sobolev(g, o.shell_samples, derive_seed(o.seed, kStreamLogSobolev))},
          {"mixing_scale", mixing_scale(g, o.kappa, radii)},
          {"kappa", o.kappa},
          {"shell_samples", o.shell_samples},
          {"mixing_radii", radii}};
}

bool run_experiment(const Config& c, Outputs& outputs, std::ostream& out) {
  switch (c.experiment) {
    case Experiment::lyapunov: {
      const LyapunovRun r = run_lyapunov(c);
      outputs.emplace_back("lyapunov_report.json", dump(to_json(r)));
      out << "lyapunov: " << r.report.source << " lambda=(" << fmt(r.report.mean_exponents[0])
          << ", " << fmt(r.report.mean_exponents[1]) << ")";
      if (r.bound_gap) out << " bound_gap=" << fmt(*r.bound_gap);
      out << (r.pass ? " PASS" : " FAIL") << '\n';
      return r.pass;
    }
    case Experiment::ruelle: {
      const RuelleReport r = run_ruelle(c);
      outputs.emplace_back("ruelle_report.json", dump(to_json(r)));
      out << "ruelle: " << r.map << " entropy=" << fmt(r.entropy_estimate)
          << " bias=" << fmt(r.entropy_bias_bound)
          << " sum_positive=" << fmt(r.sum_positive_exponents) << " stderr=" << fmt(r.stderr_)
          << " nu_log=" << fmt(r.nu_log_bound_value) << (r.pass ? " PASS" : " FAIL") << '\n';
      return r.pass;
    }
    case Experiment::mixing: {
      const MixingReport r = run_mixing(c);
      outputs.emplace_back("mixing_report.json", dump(to_json(r)));
      outputs.emplace_back("mixing_series.csv", r.series.to_csv());
      outputs.emplace_back("mixing_series.json", dump(r.series.sidecar()));
      outputs.emplace_back("grid_final.bin", encode_grid_binary(r.final_grid));
      outputs.emplace_back("grid_final.bin.json", dump(grid_sidecar(r.final_grid)));
      out << "mixing: beta=" << fmt(r.fitted_h_minus_one_rate)
          << " log_sobolev_slope=" << fmt(r.fitted_log_sobolev_slope)
          << " lambda_max=" << fmt(r.lambda_max_integral) << " ratio=" << fmt(r.ratio_mixing)
          << (r.pass_direction ? " PASS" : " FAIL") << '\n';
      return r.pass_direction;
    }
    case Experiment::regularity: {
      const RegularityReport r = run_regularity(c);
      outputs.emplace_back("regularity_report.json", dump(to_json(r)));
      for (const MixingReport* m : {&r.coarse, &r.fine}) {
        const std::string stem = "regularity_series_" + std::to_string(m->resolution);
        outputs.emplace_back(stem + ".csv", m->series.to_csv());
        outputs.emplace_back(stem + ".json", dump(m->series.sidecar()));
      }
      out << "regularity: slope(N=" << r.coarse.resolution
          << ")=" << fmt(r.coarse.fitted_log_sobolev_slope) << " slope(N=" << r.fine.resolution
          << ")=" << fmt(r.fine.fitted_log_sobolev_slope)
          << " change=" << fmt(r.slope_relative_change) << (r.pass ? " PASS" : " FAIL") << '\n';
      return r.pass;
    }
    case Experiment::diagnose: {
      const GridField g = read_grid_field(c.input);
      const DiagnoseOptions o{c.kappa, c.shell_samples, c.mixing_radii, c.seed};
      const auto j = diagnose_grid(g, o);
      outputs.emplace_back("diagnose_report.json", dump(j));
      out << "diagnose: h_minus_one=" << fmt(j["h_minus_one"].get<double>())
          << " log_sobolev=" << fmt(j["log_sobolev"].get<double>())
          << " mixing_scale=" << fmt(j["mixing_scale"].get<double>()) << '\n';
      return true;
    }
  }
  return false;
}

void print_catalog(std::ostream& out) {
  out << "fields (k = wavenumber, A = amplitude, phases phi0, phi1 in turns):\n"
         "  zero               b = 0\n"
         "  constant           b = A (cos 2pi phi0, sin 2pi phi0)\n"
         "  steady_shear       b = (A sin 2pi k(y + phi0), 0)\n"
         "  alternating_shear  steady_shear for t mod 1 < 1/2, then (0, A sin 2pi k(x + phi1))\n"
         "  cellular           b = A (sin X cos Y, -cos X sin Y), X = 2pi k(x + phi0), "
         "Y = 2pi k(y + phi1)\n"
         "maps:\n"
         "  cat                (x, y) -> (2x + y, x + y) mod 1\n"
         "  baker              (2x, y/2) for x < 1/2, (2x - 1, (y + 1)/2) for x > 1/2\n"
         "  time_one_flow      time-one map of [field], steps_per_unit RK4 steps\n"
         "initial data:\n"
         "  sinusoid           sin 2pi (k . x), wavevector k\n"
         "  checkerboard       +-1 squares of side 2^-level (level >= 1)\n"
         "  stripe             +-1 vertical stripes of width 2^-(level+1)\n"
         "experiments: lyapunov, ruelle, mixing, regularity, diagnose\n";
  out << "kernels:";
  for (const auto* k : kernels::available_kernels()) out << ' ' << k->name;
  out << " (active: " << kernels::active_kernels().name << ")\n";
  out << "workers: " << worker_count() << '\n';
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const UndersampledError& e) {
    err << "undersampled: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitInputError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const NonFiniteError& e) {
    err << "non-finite: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const SingularInputError& e) {
    err << "singular input: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDivergence;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ergomix: ergodic diagnostics for incompressible flows on the torus"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string output_override;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--set", sets, "override, key=value (repeatable)");
  run->add_option("--output", output_override, "output directory (overrides config)");

  std::string grid_path;
  std::string diag_output = ".";
  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand("diagnose", "diagnostics of a stored GridField");
  diagnose->add_option("grid", grid_path, "GridField binary (with .json sidecar)")->required();
  diagnose->add_option("--kappa", diag.kappa, "mixing-scale threshold")->check(CLI::Range(0.0, 1.0));
  diagnose->add_option("--shell-samples", diag.shell_samples, "log-Sobolev samples")
      ->check(CLI::Range(32, 1000000));
  diagnose->add_option("--radii", diag.mixing_radii, "number of mixing radii")
      ->check(CLI::Range(2, 1000));
  diagnose->add_option("--seed", diag.seed, "seed");
  diagnose->add_option("--output", diag_output, "output directory");

  auto* catalog = app.add_subcommand("catalog", "list fields, maps and initial data");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (catalog->parsed()) {
    print_catalog(out);
    return kExitOk;
  }

  if (diagnose->parsed()) {
    return guarded(err, [&] {
      if (!fs::exists(grid_path)) throw FileError("no such file '" + grid_path + "'");
      const GridField g = read_grid_field(grid_path);
      const auto j = diagnose_grid(g, diag);
      write_outputs(diag_output, {{"diagnose_report.json", dump(j)}});
      out << "diagnose: h_minus_one=" << fmt(j["h_minus_one"].get<double>())
          << " log_sobolev=" << fmt(j["log_sobolev"].get<double>())
          << " mixing_scale=" << fmt(j["mixing_scale"].get<double>()) << '\n';
      return static_cast<int>(kExitOk);
    });
  }

  return guarded(err, [&] {
    if (!fs::exists(config_path)) throw FileError("no such file '" + config_path + "'");
    Overrides overrides;
    for (const auto& s : sets) overrides.push_back(parse_override(s));
    if (!output_override.empty()) overrides.emplace_back("output", output_override);
    const Config c = parse_config(read_text_file(config_path), overrides);
    out << "# config (defaults materialised)\n" << render_config(c);
    Outputs outputs;
    const bool pass = run_experiment(c, outputs, out);
    outputs.emplace_back("config.toml", render_config(c));
    write_outputs(c.output, outputs);
    return static_cast<int>(pass ? kExitOk : kExitGateFailed);
  });
}

}  // namespace ergomix
