#include "ergomix/kernels/dispatch.hpp"

#include <cstdlib>
#include <string>

namespace ergomix::kernels {

#if defined(ERGOMIX_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif
#if defined(ERGOMIX_HAVE_NEON)
const KernelTable& neon_kernel_table();
#endif

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> tables{&scalar_kernels()};
#if defined(ERGOMIX_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) tables.push_back(&avx2_kernel_table());
#endif
#if defined(ERGOMIX_HAVE_NEON)
  tables.push_back(&neon_kernel_table());
#endif
  return tables;
}

namespace {

const KernelTable& choose() {
  const auto tables = available_kernels();
  if (const char* env = std::getenv("ERGOMIX_SIMD"); env != nullptr && *env != '\0') {
    const std::string wanted(env);
    for (const auto* t : tables) {
      if (t->name == wanted) return *t;
    }
  }
  return *tables.back();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = choose();
  return table;
}

}  // namespace ergomix::kernels
