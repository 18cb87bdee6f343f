#include "specden/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace specden::simd {

namespace {

constexpr Kernels kScalar = {
    scalar::dot,    scalar::dot_dual, scalar::axpy,
    scalar::two_axpy, scalar::pv_sum, scalar::pv_sum_sub,
};

#if SPECDEN_HAVE_AVX2_TU
constexpr Kernels kAvx2 = {
    avx2::dot,    avx2::dot_dual, avx2::axpy,
    avx2::two_axpy, avx2::pv_sum, avx2::pv_sum_sub,
};

bool cpu_has_avx2_fma() {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}
#endif

struct Selection {
  const Kernels* kernels;
  const char* name;
};

Selection select() {
  const char* forced = std::getenv("SPECDEN_SIMD");
  if (forced && std::strcmp(forced, "scalar") == 0) return {&kScalar, "scalar"};
#if SPECDEN_HAVE_AVX2_TU
  if (cpu_has_avx2_fma()) {
    if (!forced || std::strcmp(forced, "avx2") == 0) return {&kAvx2, "avx2"};
  }
#endif
  return {&kScalar, "scalar"};
}

const Selection& selection() {
  static const Selection sel = select();
  return sel;
}

}  // namespace

const Kernels& active() { return *selection().kernels; }

std::string_view active_backend() { return selection().name; }

}  // namespace specden::simd
