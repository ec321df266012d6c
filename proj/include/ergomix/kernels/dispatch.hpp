#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ergomix/kernels/field_coeffs.hpp"

namespace ergomix::kernels {

/// One ISA's implementation of the data-parallel inner loops.
struct KernelTable {
  std::string_view name;
  std::size_t lanes;
  /// RK4-advect n points in place from t0 to t1.
  void (*advect)(const FieldCoeffs& f, double t0, double t1, int steps, double* x, double* y,
                 std::size_t n);
  /// RK4-advect n points jointly with their tangent matrices (W updated in place).
  void (*advect_cocycle)(const FieldCoeffs& f, double t0, double t1, int steps,
                         const CocycleBatch& batch, std::size_t n);
  /// sum_i (a_i - b_i)^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Tables compiled into this binary and supported by the running CPU, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Table used by the library: the widest available, unless ERGOMIX_SIMD names
/// another one ("scalar", "avx2", "neon").
const KernelTable& active_kernels();

}  // namespace ergomix::kernels
