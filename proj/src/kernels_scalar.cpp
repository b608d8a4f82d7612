#include "ew/kernels.hpp"

namespace ew::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void min_max_scalar(const double* x, std::size_t n, double* mn, double* mx) {
  double lo = x[0], hi = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] < lo) lo = x[i];
    if (x[i] > hi) hi = x[i];
  }
  *mn = lo;
  *mx = hi;
}

void central_sums_scalar(const double* x, std::size_t n, double mean, double* s2, double* s3,
                         double* s4) {
  double a2 = 0.0, a3 = 0.0, a4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = x[i] - mean;
    double d2 = d * d;
    a2 += d2;
    a3 += d2 * d;
    a4 += d2 * d2;
  }
  *s2 = a2;
  *s3 = a3;
  *s4 = a4;
}

void filter_downsample_scalar(const double* x, std::size_t n, const double* lo, const double* hi,
                              double* approx, double* detail) {
  std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
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

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar",        sum_scalar,          dot_scalar,
      min_max_scalar,  central_sums_scalar, filter_downsample_scalar,
  };
  return ops;
}

}  // namespace ew::kernels
