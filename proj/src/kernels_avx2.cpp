// AVX2 kernel variants. This translation unit is compiled with -mavx2 and is
// only linked on x86-64 builds; runtime selection happens in kernels.cpp.
#include "ew/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace ew::kernels {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, swapped));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double total = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) total += x[i];
  return total;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, p);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * y[i];
  return total;
}

void min_max_avx2(const double* x, std::size_t n, double* mn, double* mx) {
  std::size_t i = 0;
  double lo, hi;
  if (n >= 4) {
    __m256d vlo = _mm256_loadu_pd(x);
    __m256d vhi = vlo;
    for (i = 4; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      vlo = _mm256_min_pd(vlo, v);
      vhi = _mm256_max_pd(vhi, v);
    }
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, vlo);
    lo = tmp[0];
    for (int k = 1; k < 4; ++k)
      if (tmp[k] < lo) lo = tmp[k];
    _mm256_store_pd(tmp, vhi);
    hi = tmp[0];
    for (int k = 1; k < 4; ++k)
      if (tmp[k] > hi) hi = tmp[k];
  } else {
    lo = hi = x[0];
    i = 1;
  }
  for (; i < n; ++i) {
    if (x[i] < lo) lo = x[i];
    if (x[i] > hi) hi = x[i];
  }
  *mn = lo;
  *mx = hi;
}

void central_sums_avx2(const double* x, std::size_t n, double mean, double* s2, double* s3,
                       double* s4) {
  __m256d vmean = _mm256_set1_pd(mean);
  __m256d a2 = _mm256_setzero_pd();
  __m256d a3 = _mm256_setzero_pd();
  __m256d a4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmean);
    __m256d d2 = _mm256_mul_pd(d, d);
    a2 = _mm256_add_pd(a2, d2);
    a3 = _mm256_add_pd(a3, _mm256_mul_pd(d2, d));
    a4 = _mm256_add_pd(a4, _mm256_mul_pd(d2, d2));
  }
  double t2 = hsum(a2), t3 = hsum(a3), t4 = hsum(a4);
  for (; i < n; ++i) {
    double d = x[i] - mean;
    double d2 = d * d;
    t2 += d2;
    t3 += d2 * d;
    t4 += d2 * d2;
  }
  *s2 = t2;
  *s3 = t3;
  *s4 = t4;
}

// Dense 4-tap convolution over one output block of four, then the even taps
// are the downsampled result. Outputs y[t] = sum_j x[t+j] f[j] for t = 2i.
void filter_downsample_avx2(const double* x, std::size_t n, const double* lo, const double* hi,
                            double* approx, double* detail) {
  std::size_t half = n / 2;
  __m256d l0 = _mm256_set1_pd(lo[0]), l1 = _mm256_set1_pd(lo[1]);
  __m256d l2 = _mm256_set1_pd(lo[2]), l3 = _mm256_set1_pd(lo[3]);
  __m256d h0 = _mm256_set1_pd(hi[0]), h1 = _mm256_set1_pd(hi[1]);
  __m256d h2 = _mm256_set1_pd(hi[2]), h3 = _mm256_set1_pd(hi[3]);
  static const __m256i even = _mm256_set_epi64x(6, 4, 2, 0);
  std::size_t i = 0;
  // Four outputs read x[2i .. 2i+9]; stop before the circular wrap.
  while (i + 4 <= half && 2 * i + 9 < n) {
    const double* base = x + 2 * i;
    __m256d e0 = _mm256_i64gather_pd(base, even, 8);
    __m256d o0 = _mm256_i64gather_pd(base + 1, even, 8);
    __m256d e1 = _mm256_i64gather_pd(base + 2, even, 8);
    __m256d o1 = _mm256_i64gather_pd(base + 3, even, 8);
    __m256d a = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(e0, l0), _mm256_mul_pd(o0, l1)),
                              _mm256_add_pd(_mm256_mul_pd(e1, l2), _mm256_mul_pd(o1, l3)));
    __m256d d = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(e0, h0), _mm256_mul_pd(o0, h1)),
                              _mm256_add_pd(_mm256_mul_pd(e1, h2), _mm256_mul_pd(o1, h3)));
    _mm256_storeu_pd(approx + i, a);
    _mm256_storeu_pd(detail + i, d);
    i += 4;
  }
  for (; i < half; ++i) {
    double a = 0.0, d = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      double v = x[(2 * i + j) % n];
      a += v * lo[j];
      d += v * hi[j];
    }
    approx[i] = a;
    detail[i] = d;
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{
      "avx2",        sum_avx2,          dot_avx2,
      min_max_avx2,  central_sums_avx2, filter_downsample_avx2,
  };
  return &ops;
}

}  // namespace ew::kernels

#endif  // __AVX2__
