#pragma once

#include <cstddef>

namespace ew::kernels {

// Dense arithmetic inner loops behind the feature extractor. Every kernel has
// a scalar reference implementation and, on x86-64, an AVX2 variant; the two
// are equivalence-tested against each other and selected once at startup.
// Inputs never contain NaN: callers compact missing values out first.
struct Ops {
  const char* name;

  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*min_max)(const double* x, std::size_t n, double* mn, double* mx);

  // Accumulates sum((x-mean)^k) for k = 2, 3, 4 in one pass.
  void (*central_sums)(const double* x, std::size_t n, double mean, double* s2, double* s3,
                       double* s4);

  // One analysis level of a 4-tap two-channel filter bank with circular
  // extension: approx[i] = sum_j lo[j] * x[(2i+j) mod n], same for detail
  // with hi. n must be even and >= 2; approx/detail hold n/2 values each.
  void (*filter_downsample)(const double* x, std::size_t n, const double* lo, const double* hi,
                            double* approx, double* detail);
};

const Ops& scalar_ops();

// Null when the binary was built without AVX2 support or the CPU lacks it.
const Ops* avx2_ops();

// AVX2 when available, else scalar. EW_KERNELS=scalar|avx2 overrides.
const Ops& active_ops();

}  // namespace ew::kernels
