#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ew/dataset.hpp"
#include "ew/series.hpp"

namespace ew {

inline constexpr int kStatsPerSignal = 10;
inline constexpr int kWaveletBands = 6;  // d1..d5, a5
inline constexpr int kSignalPairs = kNumSignals * (kNumSignals - 1) / 2;
inline constexpr int kFeatureCount =
    kNumSignals * (kStatsPerSignal + kWaveletBands) + kSignalPairs;  // 111

// Fixed feature layout: per-signal stats, then per-signal wavelet band
// energies, then lag-0 cross-correlations of the 15 signal pairs.
namespace feature_schema {
const std::vector<std::string>& names();
int index_of(const std::string& name);  // -1 if unknown
std::uint64_t hash();
}  // namespace feature_schema

struct WindowStats {
  double mean, sd, variance, median, min, max, iqr, skewness, kurtosis, slope;
};

// Statistics over present values; indices of present values keep their
// original minute offsets for the slope fit. Fewer than two present values
// yields an all-missing row (imputed downstream). Standardized moments of a
// constant window are 0 by the zero-variance rule.
WindowStats window_stats(std::span<const double> values);

// Pearson correlation at lag 0 over minutes where both values are present.
// Zero variance on either side, or fewer than two shared minutes, gives 0.
double pearson_lag0(std::span<const double> a, std::span<const double> b);

// Relative band energies (d1..d5, a5) of a 5-level Daubechies-4 analysis with
// circular extension. The bank runs on the most recent 2^k samples of the
// window (k maximal, at least 32 required), which keeps every level even and
// the transform exactly orthogonal. Missing samples are filled with the mean
// of the present ones; fewer than two present gives an all-missing row. The
// six energies sum to 1 for any nonzero input and are all 0 for zero input.
std::array<double, kWaveletBands> wavelet_energies(std::span<const double> values);

// Writes the kFeatureCount-wide row for one observation window. Missing stat
// and wavelet rows are NaN; correlations are always finite.
void featurize_window(const EntitySeries& series, IndexRange ow, double* out);

// Per-feature training-set medians used to fill missing entries. Fit on
// training folds only.
struct Imputer {
  std::vector<double> medians;

  static Imputer fit(MatrixView x);
  void apply(double* row, std::size_t n_cols) const;
  void apply(Dataset& ds) const;
};

}  // namespace ew
