#include "ew/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ew::kernels {

#if defined(EW_HAVE_AVX2_BUILD)
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(EW_HAVE_AVX2_BUILD)
  static const Ops* ops = []() -> const Ops* {
    return __builtin_cpu_supports("avx2") ? avx2_ops_impl() : nullptr;
  }();
  return ops;
#else
  return nullptr;
#endif
}

const Ops& active_ops() {
  static const Ops* selected = [] {
    const Ops* pick = avx2_ops() ? avx2_ops() : &scalar_ops();
    if (const char* env = std::getenv("EW_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) pick = &scalar_ops();
      if (std::strcmp(env, "avx2") == 0 && avx2_ops()) pick = avx2_ops();
    }
    return pick;
  }();
  return *selected;
}

}  // namespace ew::kernels
