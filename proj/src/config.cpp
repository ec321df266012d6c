#include "ergomix/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ergomix/errors.hpp"
#include "ergomix/flow.hpp"

namespace ergomix {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Position of the first '#' outside quotes, or npos.
std::size_t comment_start(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quote != 0) {
      if (ch == quote) quote = 0;
    } else if (ch == '"' || ch == '\'') {
      quote = ch;
    } else if (ch == '#') {
      return i;
    }
  }
  return std::string::npos;
}

std::vector<std::string> split_list(const std::string& v) {
  std::string s = v;
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Raw key/value table with typed, range-checked accessors.
class Table {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  }

  long long integer(const std::string& key, long long fallback, long long lo, long long hi) {
    if (!has(key)) return fallback;
    return parse_integer(key, text(key, ""), lo, hi);
  }

  double real(const std::string& key, double fallback, double lo, double hi, bool open_lo,
              bool open_hi) {
    if (!has(key)) return fallback;
    return parse_real(key, text(key, ""), lo, hi, open_lo, open_hi);
  }

  void reject_unknown() const {
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) throw ConfigError("unknown key '" + k + "'");
    }
  }

  static long long parse_integer(const std::string& key, const std::string& v, long long lo,
                                 long long hi) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      // accept integral reals such as 1e6
      double d = 0.0;
      try {
        std::size_t pos = 0;
        d = std::stod(v, &pos);
        if (pos != v.size() || d != std::floor(d) || std::fabs(d) > 9e18) throw 0;
      } catch (...) {
        throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
      }
      out = static_cast<long long>(d);
    }
    if (out < lo || out > hi) {
      throw ConfigError("key '" + key + "' = " + v + " out of range: " + key + " in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return out;
  }

  static double parse_real(const std::string& key, const std::string& v, double lo, double hi,
                           bool open_lo, bool open_hi) {
    double out = 0.0;
    try {
      std::size_t pos = 0;
      out = std::stod(v, &pos);
      if (pos != v.size()) throw 0;
    } catch (...) {
      throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
    }
    const bool below = open_lo ? !(out > lo) : !(out >= lo);
    const bool above = open_hi ? !(out < hi) : !(out <= hi);
    if (below || above || !std::isfinite(out)) {
      throw ConfigError("key '" + key + "' = " + v + " out of range: " + key + " in " +
                        (open_lo ? "(" : "[") + fmt_double(lo) + "," + fmt_double(hi) +
                        (open_hi ? ")" : "]"));
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

template <class Enum, class Parse>
Enum parse_enum(const std::string& key, const std::string& value, Parse parse,
                const char* allowed) {
  try {
    return parse(value);
  } catch (const InvalidArgument&) {
    throw ConfigError("key '" + key + "' = '" + value + "' not one of {" + allowed + "}");
  }
}

Experiment experiment_from_string(std::string_view s) {
  for (auto e : {Experiment::lyapunov, Experiment::ruelle, Experiment::mixing,
                 Experiment::regularity, Experiment::diagnose}) {
    if (to_string(e) == s) return e;
  }
  throw InvalidArgument("unknown experiment");
}

constexpr long long kBig = 1000000000LL;

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::lyapunov: return "lyapunov";
    case Experiment::ruelle: return "ruelle";
    case Experiment::mixing: return "mixing";
    case Experiment::regularity: return "regularity";
    case Experiment::diagnose: return "diagnose";
  }
  return "unknown";
}

std::pair<std::string, std::string> parse_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' must look like key=value");
  }
  return {trim(assignment.substr(0, eq)), unquote(trim(assignment.substr(eq + 1)))};
}

Config parse_config(std::string_view text, const Overrides& overrides) {
  Table t;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = comment_start(raw);
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    t.set(key, unquote(trim(line.substr(eq + 1))));
  }
  for (const auto& [k, v] : overrides) t.set(k, v);

  Config c;
  c.experiment = parse_enum<Experiment>("experiment", t.required("experiment"),
                                        experiment_from_string,
                                        "lyapunov, ruelle, mixing, regularity, diagnose");
  c.seed = static_cast<std::uint64_t>(
      Table::parse_integer("seed", t.required("seed"), 0, std::numeric_limits<long long>::max()));
  c.output = t.text("output", c.output);
  c.input = t.text("input", c.input);
  if (c.experiment == Experiment::diagnose && c.input.empty()) {
    throw ConfigError("missing required key 'input' for experiment = diagnose");
  }

  c.field.kind = parse_enum<FieldKind>("field.kind", t.text("field.kind", "alternating_shear"),
                                       field_kind_from_string,
                                       "zero, constant, steady_shear, alternating_shear, cellular");
  c.field.amplitude = t.real("field.amplitude", c.field.amplitude, 0.0, 1e6, false, false);
  if (t.has("field.phases")) {
    const auto items = split_list(t.text("field.phases", ""));
    if (items.size() > 2) throw ConfigError("key 'field.phases' takes at most 2 values");
    c.field.phases = {0.0, 0.0};
    for (std::size_t i = 0; i < items.size(); ++i) {
      c.field.phases[i] = Table::parse_real("field.phases", items[i], 0.0, 1.0, false, true);
    }
  }
  c.field.wavenumber = static_cast<int>(t.integer("field.wavenumber", c.field.wavenumber, 1, 1000));

  c.datum.kind = parse_enum<DatumKind>("datum.kind", t.text("datum.kind", "checkerboard"),
                                       datum_kind_from_string, "sinusoid, checkerboard, stripe");
  c.datum.level = static_cast<int>(
      t.integer("datum.level", c.datum.level, c.datum.kind == DatumKind::checkerboard ? 1 : 0, 20));
  if (t.has("datum.wavevector")) {
    const auto items = split_list(t.text("datum.wavevector", ""));
    if (items.size() != 2) throw ConfigError("key 'datum.wavevector' takes 2 integers");
    for (int i = 0; i < 2; ++i) {
      c.datum.wavevector[i] =
          static_cast<int>(Table::parse_integer("datum.wavevector", items[i], -1000, 1000));
    }
    if (c.datum.wavevector[0] == 0 && c.datum.wavevector[1] == 0) {
      throw ConfigError("key 'datum.wavevector' must be nonzero (mean-free datum)");
    }
  }

  c.map = parse_enum<MapKind>("map.kind", t.text("map.kind", "cat"), map_kind_from_string,
                              "cat, baker, time_one_flow");

  c.n = static_cast<int>(t.integer("n", c.n, 1, 64));
  c.lyapunov_n = static_cast<int>(t.integer("lyapunov_n", c.lyapunov_n, 1, 1000000));
  c.lyapunov_samples = static_cast<int>(t.integer("lyapunov_samples", c.lyapunov_samples, 1, kBig));
  c.samples = t.integer("samples", c.samples, 1, kBig);
  c.level = static_cast<int>(t.integer("level", c.level, 0, 15));
  c.probes = static_cast<int>(t.integer("probes", c.probes, 16, 1000000));
  c.horizon = static_cast<int>(t.integer("horizon", c.horizon, 1, 100000));
  c.resolution = static_cast<int>(t.integer("resolution", c.resolution, 16, 16384));
  if (c.resolution % 2 != 0) throw ConfigError("key 'resolution' must be even");
  c.kappa = t.real("kappa", c.kappa, 0.0, 1.0, true, true);
  c.steps_per_unit = static_cast<int>(t.integer("steps_per_unit", c.steps_per_unit, 1, 1000000));
  c.shell_samples = static_cast<int>(t.integer("shell_samples", c.shell_samples, 32, 1000000));
  c.mixing_radii = static_cast<int>(t.integer("mixing_radii", c.mixing_radii, 2, 1000));
  c.burn_in_fraction = t.real("burn_in_fraction", c.burn_in_fraction, 0.0, 1.0, false, true);
  c.quadrature.space_points = static_cast<int>(
      t.integer("quadrature.space_points", c.quadrature.space_points, 16, 100000));
  c.quadrature.time_points = static_cast<int>(
      t.integer("quadrature.time_points", c.quadrature.time_points, 16, 100000));

  t.reject_unknown();
  return c;
}

std::string render_config(const Config& c) {
  std::ostringstream os;
  os << "experiment = " << to_string(c.experiment) << '\n'
     << "seed = " << c.seed << '\n'
     << "output = \"" << c.output << "\"\n";
  if (!c.input.empty()) os << "input = \"" << c.input << "\"\n";
  os << "n = " << c.n << '\n'
     << "lyapunov_n = " << c.lyapunov_n << '\n'
     << "lyapunov_samples = " << c.lyapunov_samples << '\n'
     << "samples = " << c.samples << '\n'
     << "level = " << c.level << '\n'
     << "probes = " << c.probes << '\n'
     << "horizon = " << c.horizon << '\n'
     << "resolution = " << c.resolution << '\n'
     << "kappa = " << fmt_double(c.kappa) << '\n'
     << "steps_per_unit = " << c.steps_per_unit << '\n'
     << "shell_samples = " << c.shell_samples << '\n'
     << "mixing_radii = " << c.mixing_radii << '\n'
     << "burn_in_fraction = " << fmt_double(c.burn_in_fraction) << '\n'
     << "\n[field]\n"
     << "kind = " << to_string(c.field.kind) << '\n'
     << "amplitude = " << fmt_double(c.field.amplitude) << '\n'
     << "phases = " << fmt_double(c.field.phases.at(0)) << ", " << fmt_double(c.field.phases.at(1))
     << '\n'
     << "wavenumber = " << c.field.wavenumber << '\n'
     << "\n[datum]\n"
     << "kind = " << to_string(c.datum.kind) << '\n'
     << "level = " << c.datum.level << '\n'
     << "wavevector = " << c.datum.wavevector[0] << ", " << c.datum.wavevector[1] << '\n'
     << "\n[map]\n"
     << "kind = " << to_string(c.map) << '\n'
     << "\n[quadrature]\n"
     << "space_points = " << c.quadrature.space_points << '\n'
     << "time_points = " << c.quadrature.time_points << '\n';
  return os.str();
}

VelocityField make_field(const Config& config) { return VelocityField(config.field); }

InitialDatum make_initial(const Config& config) {
  return make_initial(config.datum.kind, config.datum.wavevector, config.datum.level);
}

MeasurePreservingMap make_map(const Config& config) {
  switch (config.map) {
    case MapKind::cat: return MeasurePreservingMap::cat();
    case MapKind::baker: return MeasurePreservingMap::baker();
    case MapKind::time_one_flow: return time_one_map(make_field(config), config.steps_per_unit);
  }
  return MeasurePreservingMap::cat();
}

}  // namespace ergomix
