#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergomix/fields.hpp"
#include "ergomix/maps.hpp"
#include "ergomix/scalar.hpp"

namespace ergomix {

enum class Experiment { lyapunov, ruelle, mixing, regularity, diagnose };

std::string_view to_string(Experiment e);

struct DatumSpec {
  DatumKind kind = DatumKind::checkerboard;
  int level = 2;
  std::array<int, 2> wavevector{1, 0};

  friend bool operator==(const DatumSpec&, const DatumSpec&) = default;
};

/// Validated experiment configuration with every default materialised.
struct Config {
  Experiment experiment = Experiment::mixing;
  std::uint64_t seed = 0;
  std::string output = "out";
  std::string input;  // grid file for `experiment = diagnose`

  VelocityFieldSpec field{FieldKind::alternating_shear, 1.0, {0.0, 0.0}, 1};
  DatumSpec datum;
  MapKind map = MapKind::cat;

  int n = 8;
  int lyapunov_n = 100;
  int lyapunov_samples = 1000;
  long long samples = 1000000;
  int level = 4;
  int probes = 64;
  int horizon = 20;
  int resolution = 512;
  double kappa = 1.0 / 3.0;
  int steps_per_unit = 256;
  int shell_samples = 256;
  int mixing_radii = 40;
  double burn_in_fraction = 0.2;
  Quadrature quadrature;

  friend bool operator==(const Config&, const Config&) = default;
};

/// "key=value" overrides; dotted keys address sections ("field.amplitude=2").
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines with `[section]` headers ('#' starts a comment).
/// Errors name the offending key and its valid range.
Config parse_config(std::string_view text, const Overrides& overrides = {});

/// Splits "key=value"; throws ConfigError when '=' is missing.
std::pair<std::string, std::string> parse_override(std::string_view assignment);

/// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const Config& config);

VelocityField make_field(const Config& config);
InitialDatum make_initial(const Config& config);
MeasurePreservingMap make_map(const Config& config);

}  // namespace ergomix
