#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ergomix/fields.hpp"
#include "ergomix/torus.hpp"

namespace ergomix {

enum class DatumKind { sinusoid, checkerboard, stripe };

std::string_view to_string(DatumKind kind);
DatumKind datum_kind_from_string(std::string_view name);

/// Mean-free initial scalar with closed-form norms.
///   sinusoid      sin 2pi (k . x)
///   checkerboard  sign(sin 2^m pi x * sin 2^m pi y), cells of side 2^-m (m >= 1)
///   stripe        sign(sin 2^(m+1) pi x), stripes of width 2^-(m+1) (m >= 0)
struct InitialDatum {
  DatumKind kind = DatumKind::sinusoid;
  std::array<int, 2> wavevector{1, 0};
  int level = 1;
  double sup_norm = 1.0;
  double l2_norm = 0.0;
  double bv_seminorm = 0.0;

  double operator()(double x, double y) const;
  double operator()(const TorusPoint& p) const { return (*this)(p.x(), p.y()); }
  std::string describe() const;
};

InitialDatum make_initial(DatumKind kind, std::array<int, 2> wavevector = {1, 0}, int level = 1);

/// Samples of rho(t, .) at the nodes ((ix + 1/2)/N, (iy + 1/2)/N), stored at
/// values[iy * N + ix].
struct GridField {
  int resolution = 0;
  double time = 0.0;
  std::vector<double> values;
  InitialDatum datum;
  std::string source;

  static double node(int i, int n) { return (i + 0.5) / n; }
  double at(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * resolution + ix];
  }
  double mean() const;
  /// Discrete L2 norm after removing the mean.
  double l2_norm() const;
};

/// rho(t, x) = rho_in(X_t^{-1}(x)) by backward RK4 characteristics from every
/// node; round(t * steps_per_unit) steps.
GridField sample_scalar(const VelocityField& field, const InitialDatum& datum, double t,
                        int resolution, int steps_per_unit);

/// Grids at integer times 0, 1, ..., horizon. Foot points are carried back one
/// period at a time with the backward time-one map (time periodicity).
std::vector<GridField> sample_scalar_series(const VelocityField& field,
                                            const InitialDatum& datum, int horizon,
                                            int resolution, int steps_per_unit);

nlohmann::json to_json(const InitialDatum& datum);
InitialDatum datum_from_json(const nlohmann::json& j);

/// Flat binary payload: row-major float64, little-endian.
std::string encode_grid_binary(const GridField& grid);
nlohmann::json grid_sidecar(const GridField& grid);
std::string grid_csv(const GridField& grid);

/// Writes `path` (binary) and `path` + ".json" (sidecar).
void write_grid_field(const GridField& grid, const std::filesystem::path& path);
/// Reads a binary grid and its ".json" sidecar.
GridField read_grid_field(const std::filesystem::path& path);

}  // namespace ergomix
