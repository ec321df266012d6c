#include "ergomix/scalar.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "ergomix/errors.hpp"
#include "ergomix/flow.hpp"
#include "ergomix/io.hpp"
#include "ergomix/parallel.hpp"

namespace ergomix {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxLevel = 20;

bool even_cell(double coord, int cells) {
  const auto i = static_cast<long long>(std::floor(coord * cells));
  return i % 2 == 0;
}

std::vector<double> node_axis(int n) {
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = GridField::node(i, n);
  return axis;
}

void node_coordinates(int n, std::vector<double>& xs, std::vector<double>& ys) {
  const auto axis = node_axis(n);
  const std::size_t total = static_cast<std::size_t>(n) * n;
  xs.resize(total);
  ys.resize(total);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      xs[k] = axis[ix];
      ys[k] = axis[iy];
    }
  }
}

GridField evaluate_at(const InitialDatum& datum, const VelocityField& field, double t, int n,
                      const std::vector<double>& xs, const std::vector<double>& ys) {
  GridField g;
  g.resolution = n;
  g.time = t;
  g.datum = datum;
  g.source = field.describe();
  g.values.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) g.values[i] = datum(xs[i], ys[i]);
  });
  return g;
}

void check_resolution(int n) {
  if (n < 16) throw InvalidArgument("resolution must be >= 16");
  if (n % 2 != 0) throw InvalidArgument("resolution must be even");
}

}  // namespace

std::string_view to_string(DatumKind kind) {
  switch (kind) {
    case DatumKind::sinusoid: return "sinusoid";
    case DatumKind::checkerboard: return "checkerboard";
    case DatumKind::stripe: return "stripe";
  }
  return "unknown";
}

DatumKind datum_kind_from_string(std::string_view name) {
  for (auto k : {DatumKind::sinusoid, DatumKind::checkerboard, DatumKind::stripe}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown datum kind '" + std::string(name) +
                        "' (expected sinusoid, checkerboard, stripe)");
}

double InitialDatum::operator()(double x, double y) const {
  switch (kind) {
    case DatumKind::sinusoid:
      return std::sin(2.0 * kPi * (wavevector[0] * x + wavevector[1] * y));
    case DatumKind::checkerboard: {
      const int cells = 1 << level;
      return even_cell(x, cells) == even_cell(y, cells) ? 1.0 : -1.0;
    }
    case DatumKind::stripe:
      return even_cell(x, 2 << level) ? 1.0 : -1.0;
  }
  return 0.0;
}

std::string InitialDatum::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == DatumKind::sinusoid) {
    os << "(k=(" << wavevector[0] << "," << wavevector[1] << "))";
  } else {
    os << "(level=" << level << ")";
  }
  return os.str();
}

InitialDatum make_initial(DatumKind kind, std::array<int, 2> wavevector, int level) {
  InitialDatum d;
  d.kind = kind;
  d.sup_norm = 1.0;
  switch (kind) {
    case DatumKind::sinusoid:
      if (wavevector[0] == 0 && wavevector[1] == 0) {
        throw InvalidArgument("sinusoid wavevector must be nonzero (datum must be mean-free)");
      }
      d.wavevector = wavevector;
      d.level = 0;
      d.l2_norm = std::sqrt(0.5);
      d.bv_seminorm = 4.0 * std::hypot(wavevector[0], wavevector[1]);
      break;
    case DatumKind::checkerboard:
    case DatumKind::stripe: {
      const int min_level = kind == DatumKind::checkerboard ? 1 : 0;
      if (level < min_level || level > kMaxLevel) {
        throw InvalidArgument(std::string(to_string(kind)) + " level must be in [" +
                              std::to_string(min_level) + ", " + std::to_string(kMaxLevel) +
                              "]");
      }
      d.wavevector = {0, 0};
      d.level = level;
      d.l2_norm = 1.0;
      d.bv_seminorm = 4.0 * std::ldexp(1.0, level);
      break;
    }
  }
  return d;
}

double GridField::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

double GridField::l2_norm() const {
  const double m = mean();
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return values.empty() ? 0.0 : std::sqrt(s / static_cast<double>(values.size()));
}

GridField sample_scalar(const VelocityField& field, const InitialDatum& datum, double t,
                        int resolution, int steps_per_unit) {
  check_resolution(resolution);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("t must be finite and >= 0");
  if (steps_per_unit < 1) throw InvalidArgument("steps_per_unit must be >= 1");
  std::vector<double> xs, ys;
  node_coordinates(resolution, xs, ys);
  const long long steps = std::llround(t * steps_per_unit);
  if (steps > 0) advect_batch(field, xs, ys, t, 0.0, static_cast<int>(steps));
  return evaluate_at(datum, field, t, resolution, xs, ys);
}

std::vector<GridField> sample_scalar_series(const VelocityField& field,
                                            const InitialDatum& datum, int horizon,
                                            int resolution, int steps_per_unit) {
  check_resolution(resolution);
  if (horizon < 0) throw InvalidArgument("horizon must be >= 0");
  if (steps_per_unit < 1) throw InvalidArgument("steps_per_unit must be >= 1");
  std::vector<double> xs, ys;
  node_coordinates(resolution, xs, ys);
  std::vector<GridField> out;
  out.reserve(static_cast<std::size_t>(horizon) + 1);
  out.push_back(evaluate_at(datum, field, 0.0, resolution, xs, ys));
  for (int t = 1; t <= horizon; ++t) {
    advect_batch(field, xs, ys, 1.0, 0.0, steps_per_unit);
    out.push_back(evaluate_at(datum, field, t, resolution, xs, ys));
  }
  return out;
}

nlohmann::json to_json(const InitialDatum& d) {
  return {{"kind", to_string(d.kind)},       {"wavevector", d.wavevector},
          {"level", d.level},                {"sup_norm", d.sup_norm},
          {"l2_norm", d.l2_norm},            {"bv_seminorm", d.bv_seminorm}};
}

InitialDatum datum_from_json(const nlohmann::json& j) {
  InitialDatum d;
  d.kind = datum_kind_from_string(j.at("kind").get<std::string>());
  d.wavevector = j.at("wavevector").get<std::array<int, 2>>();
  d.level = j.at("level").get<int>();
  d.sup_norm = j.at("sup_norm").get<double>();
  d.l2_norm = j.at("l2_norm").get<double>();
  d.bv_seminorm = j.at("bv_seminorm").get<double>();
  return d;
}

std::string encode_grid_binary(const GridField& grid) {
  std::string out(grid.values.size() * sizeof(double), '\0');
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(grid.values[i]);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    std::memcpy(out.data() + i * sizeof(double), &bits, sizeof(double));
  }
  return out;
}

nlohmann::json grid_sidecar(const GridField& grid) {
  return {{"resolution", grid.resolution},
          {"time", grid.time},
          {"layout", "row-major values[iy*N+ix] at nodes ((i+0.5)/N)"},
          {"dtype", "float64-le"},
          {"datum", to_json(grid.datum)},
          {"source", grid.source}};
}

std::string grid_csv(const GridField& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "x,y,value\n";
  const int n = grid.resolution;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      os << GridField::node(ix, n) << ',' << GridField::node(iy, n) << ',' << grid.at(ix, iy)
         << '\n';
    }
  }
  return os.str();
}

void write_grid_field(const GridField& grid, const std::filesystem::path& path) {
  const std::string payload = encode_grid_binary(grid);
  const std::string sidecar = grid_sidecar(grid).dump(2) + "\n";
  auto meta = path;
  meta += ".json";
  write_file_atomic(path, payload);
  write_file_atomic(meta, sidecar);
}

GridField read_grid_field(const std::filesystem::path& path) {
  auto meta_path = path;
  meta_path += ".json";
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_text_file(meta_path));
  } catch (const nlohmann::json::exception& e) {
    throw FileError("malformed sidecar '" + meta_path.string() + "': " + e.what());
  }
  const std::string payload = read_text_file(path);
  GridField g;
  try {
    g.resolution = meta.at("resolution").get<int>();
    g.time = meta.at("time").get<double>();
    g.datum = datum_from_json(meta.at("datum"));
    g.source = meta.value("source", "");
  } catch (const nlohmann::json::exception& e) {
    throw FileError("malformed sidecar '" + meta_path.string() + "': " + e.what());
  }
  const std::size_t count = static_cast<std::size_t>(g.resolution) * g.resolution;
  if (g.resolution < 1 || payload.size() != count * sizeof(double)) {
    throw FileError("'" + path.string() + "' does not hold " + std::to_string(g.resolution) +
                    "^2 float64 values");
  }
  g.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, payload.data() + i * sizeof(double), sizeof(double));
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    g.values[i] = std::bit_cast<double>(bits);
  }
  return g;
}

}  // namespace ergomix
