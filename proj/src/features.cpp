#include "ew/features.hpp"

#include <algorithm>
#include <cmath>

#include "ew/kernels.hpp"
#include "ew/util.hpp"

namespace ew {
namespace {

const char* kSignalNames[kNumSignals] = {"hr", "sbp", "dbp", "map", "co", "pp"};
const char* kStatNames[kStatsPerSignal] = {"mean", "sd",  "var",  "median", "min",
                                           "max",  "iqr", "skew", "kurt",   "slope"};
const char* kBandNames[kWaveletBands] = {"wd1", "wd2", "wd3", "wd4", "wd5", "wa5"};

// Daubechies-4 analysis filters (two vanishing moments, orthonormal).
struct Db4 {
  double lo[4];
  double hi[4];
  Db4() {
    double s3 = std::sqrt(3.0);
    double s2 = std::sqrt(2.0);
    lo[0] = (1.0 + s3) / (4.0 * s2);
    lo[1] = (3.0 + s3) / (4.0 * s2);
    lo[2] = (3.0 - s3) / (4.0 * s2);
    lo[3] = (1.0 - s3) / (4.0 * s2);
    for (int i = 0; i < 4; ++i) hi[i] = (i % 2 == 0 ? 1.0 : -1.0) * lo[3 - i];
  }
};

const Db4& db4() {
  static const Db4 f;
  return f;
}

// Linear-interpolation quantile over a sorted array.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  double pos = p * static_cast<double>(n - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo >= n - 1) return sorted[n - 1];
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::size_t compact_present(std::span<const double> values, std::vector<double>& vals,
                            std::vector<double>& idx) {
  vals.clear();
  idx.clear();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!is_missing(values[i])) {
      vals.push_back(values[i]);
      idx.push_back(static_cast<double>(i));
    }
  }
  return vals.size();
}

}  // namespace

namespace feature_schema {

const std::vector<std::string>& names() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v;
    v.reserve(kFeatureCount);
    for (int s = 0; s < kNumSignals; ++s) {
      for (const char* st : kStatNames) v.push_back(std::string(kSignalNames[s]) + "_" + st);
    }
    for (int s = 0; s < kNumSignals; ++s) {
      for (const char* b : kBandNames) v.push_back(std::string(kSignalNames[s]) + "_" + b);
    }
    for (int a = 0; a < kNumSignals; ++a) {
      for (int b = a + 1; b < kNumSignals; ++b) {
        v.push_back(std::string("corr_") + kSignalNames[a] + "_" + kSignalNames[b]);
      }
    }
    return v;
  }();
  return all;
}

int index_of(const std::string& name) {
  const auto& all = names();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::uint64_t hash() {
  static const std::uint64_t h = [] {
    std::uint64_t acc = 0xcbf29ce484222325ull;
    for (const auto& n : names()) {
      acc = fnv1a(n, acc);
      acc = fnv1a(";", acc);
    }
    return acc;
  }();
  return h;
}

}  // namespace feature_schema

WindowStats window_stats(std::span<const double> values) {
  WindowStats out{kMissing, kMissing, kMissing, kMissing, kMissing,
                  kMissing, kMissing, kMissing, kMissing, kMissing};
  std::vector<double> vals, idx;
  std::size_t n = compact_present(values, vals, idx);
  if (n < 2) return out;

  const auto& k = kernels::active_ops();
  double dn = static_cast<double>(n);
  double mean = k.sum(vals.data(), n) / dn;
  double mn, mx;
  k.min_max(vals.data(), n, &mn, &mx);
  double s2, s3, s4;
  k.central_sums(vals.data(), n, mean, &s2, &s3, &s4);

  out.mean = mean;
  out.min = mn;
  out.max = mx;
  out.variance = s2 / (dn - 1.0);
  out.sd = std::sqrt(out.variance);

  bool constant = (mn == mx);
  if (constant) {
    out.variance = 0.0;
    out.sd = 0.0;
    out.skewness = 0.0;
    out.kurtosis = 0.0;
  } else {
    double m2 = s2 / dn;
    double m3 = s3 / dn;
    double m4 = s4 / dn;
    // Adjusted Fisher-Pearson skewness; needs n >= 3.
    out.skewness =
        n >= 3 ? std::sqrt(dn * (dn - 1.0)) / (dn - 2.0) * m3 / std::pow(m2, 1.5) : 0.0;
    out.kurtosis = m4 / (m2 * m2) - 3.0;
  }

  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  out.median = quantile_sorted(sorted, 0.5);
  out.iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  // OLS slope of value on minute offset.
  if (constant) {
    out.slope = 0.0;
  } else {
    double ix_mean = k.sum(idx.data(), n) / dn;
    double sxy = k.dot(idx.data(), vals.data(), n) - dn * ix_mean * mean;
    double sxx = k.dot(idx.data(), idx.data(), n) - dn * ix_mean * ix_mean;
    out.slope = sxy / sxx;
  }
  return out;
}

double pearson_lag0(std::span<const double> a, std::span<const double> b) {
  std::size_t len = std::min(a.size(), b.size());
  std::vector<double> xa, xb;
  xa.reserve(len);
  xb.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_missing(a[i]) && !is_missing(b[i])) {
      xa.push_back(a[i]);
      xb.push_back(b[i]);
    }
  }
  std::size_t n = xa.size();
  if (n < 2) return 0.0;
  const auto& k = kernels::active_ops();
  double mna, mxa, mnb, mxb;
  k.min_max(xa.data(), n, &mna, &mxa);
  k.min_max(xb.data(), n, &mnb, &mxb);
  if (mna == mxa || mnb == mxb) return 0.0;  // zero-variance rule
  double dn = static_cast<double>(n);
  double ma = k.sum(xa.data(), n) / dn;
  double mb = k.sum(xb.data(), n) / dn;
  double sab = k.dot(xa.data(), xb.data(), n) - dn * ma * mb;
  double saa = k.dot(xa.data(), xa.data(), n) - dn * ma * ma;
  double sbb = k.dot(xb.data(), xb.data(), n) - dn * mb * mb;
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  double r = sab / std::sqrt(saa * sbb);
  return std::clamp(r, -1.0, 1.0);
}

std::array<double, kWaveletBands> wavelet_energies(std::span<const double> values) {
  std::array<double, kWaveletBands> out;
  out.fill(kMissing);
  if (values.size() < 32) {
    throw StageError("features", "wavelet bank needs a window of at least 32 samples, got " +
                                     std::to_string(values.size()));
  }
  std::size_t dyadic = 32;
  while (dyadic * 2 <= values.size()) dyadic *= 2;
  std::span<const double> tail = values.subspan(values.size() - dyadic, dyadic);

  std::vector<double> buf(tail.begin(), tail.end());
  double present_sum = 0.0;
  std::size_t present = 0;
  for (double v : buf) {
    if (!is_missing(v)) {
      present_sum += v;
      ++present;
    }
  }
  if (present < 2) return out;
  if (present < dyadic) {
    double fill = present_sum / static_cast<double>(present);
    for (double& v : buf) {
      if (is_missing(v)) v = fill;
    }
  }

  const auto& k = kernels::active_ops();
  const Db4& f = db4();
  std::vector<double> approx(dyadic / 2), detail(dyadic / 2);
  std::array<double, kWaveletBands> energy{};
  std::size_t n = dyadic;
  for (int level = 0; level < 5; ++level) {
    k.filter_downsample(buf.data(), n, f.lo, f.hi, approx.data(), detail.data());
    n /= 2;
    energy[level] = k.dot(detail.data(), detail.data(), n);
    std::copy(approx.begin(), approx.begin() + static_cast<std::ptrdiff_t>(n), buf.begin());
  }
  energy[5] = k.dot(buf.data(), buf.data(), n);

  double total = 0.0;
  for (double e : energy) total += e;
  if (total <= 0.0) {
    out.fill(0.0);
    return out;
  }
  for (int i = 0; i < kWaveletBands; ++i) out[i] = energy[i] / total;
  return out;
}

void featurize_window(const EntitySeries& series, IndexRange ow, double* out) {
  int pos = 0;
  for (SignalKind sig : kAllSignals) {
    WindowStats st = window_stats(slice(series, sig, ow));
    out[pos++] = st.mean;
    out[pos++] = st.sd;
    out[pos++] = st.variance;
    out[pos++] = st.median;
    out[pos++] = st.min;
    out[pos++] = st.max;
    out[pos++] = st.iqr;
    out[pos++] = st.skewness;
    out[pos++] = st.kurtosis;
    out[pos++] = st.slope;
  }
  for (SignalKind sig : kAllSignals) {
    auto bands = wavelet_energies(slice(series, sig, ow));
    for (double e : bands) out[pos++] = e;
  }
  for (int a = 0; a < kNumSignals; ++a) {
    for (int b = a + 1; b < kNumSignals; ++b) {
      out[pos++] = pearson_lag0(slice(series, kAllSignals[static_cast<std::size_t>(a)], ow),
                                slice(series, kAllSignals[static_cast<std::size_t>(b)], ow));
    }
  }
}

Imputer Imputer::fit(MatrixView x) {
  Imputer imp;
  imp.medians.assign(x.cols, 0.0);
  std::vector<double> col;
  col.reserve(x.rows);
  for (std::size_t c = 0; c < x.cols; ++c) {
    col.clear();
    for (std::size_t r = 0; r < x.rows; ++r) {
      double v = x.data[r * x.cols + c];
      if (!is_missing(v)) col.push_back(v);
    }
    if (col.empty()) {
      imp.medians[c] = 0.0;
      continue;
    }
    std::sort(col.begin(), col.end());
    imp.medians[c] = quantile_sorted(col, 0.5);
  }
  return imp;
}

void Imputer::apply(double* row, std::size_t n_cols) const {
  if (n_cols != medians.size()) {
    throw StageError("features", "imputer width mismatch: " + std::to_string(n_cols) + " vs " +
                                     std::to_string(medians.size()));
  }
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (is_missing(row[c])) row[c] = medians[c];
  }
}

void Imputer::apply(Dataset& ds) const {
  std::size_t n = ds.rows();
  for (std::size_t i = 0; i < n; ++i) apply(ds.row_mut(i), ds.n_cols);
}

}  // namespace ew
