#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "prionet/kernels.hpp"

namespace prionet::kernels {

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, detail::axpy_scalar, detail::rk4_combine_scalar,
                                 detail::clamp_nonnegative_scalar, detail::hermite_scalar};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(PRIONET_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{Isa::avx2, detail::axpy_avx2, detail::rk4_combine_avx2,
                                 detail::clamp_nonnegative_avx2, detail::hermite_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("PRIONET_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace prionet::kernels
