#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ew {

// Missing samples are carried as quiet NaN; they are never silently zero.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

enum class SignalKind : int { HR = 0, SBP, DBP, MAP, CO, PP };

inline constexpr int kNumSignals = 6;
inline constexpr std::array<SignalKind, kNumSignals> kAllSignals = {
    SignalKind::HR, SignalKind::SBP, SignalKind::DBP,
    SignalKind::MAP, SignalKind::CO, SignalKind::PP};

// CO and PP are derived from the raw channels and are never ingested or
// range-filtered (CO legitimately exceeds the raw-value bounds).
inline constexpr bool is_derived(SignalKind k) {
  return k == SignalKind::CO || k == SignalKind::PP;
}

const char* to_string(SignalKind k);
std::optional<SignalKind> signal_from_string(std::string_view name);

// One monitored entity: minute-sampled multivariate record. All present
// signal vectors share the same length; minute i is start_time + i.
struct EntitySeries {
  std::string entity_id;
  std::int64_t start_time = 0;
  std::array<std::vector<double>, kNumSignals> signals;

  bool has(SignalKind k) const { return !signals[static_cast<int>(k)].empty(); }
  std::vector<double>& values(SignalKind k) { return signals[static_cast<int>(k)]; }
  const std::vector<double>& values(SignalKind k) const { return signals[static_cast<int>(k)]; }

  std::size_t length() const;
  void validate() const;  // throws StageError("series") on inconsistent lengths
};

struct WindowConfig {
  int ow_minutes = 60;
  int ww_minutes = 60;
  int tw_minutes = 30;
  int train_stride_minutes = 30;  // = tw under the defaults: adjacent, non-overlapping TWs
  int eval_stride_minutes = 1;

  int span_minutes() const { return ow_minutes + ww_minutes + tw_minutes; }
  void validate() const;
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

// Unit of learning/prediction: the OW feeds the feature vector, the TW
// determines the labels, and the gap between them is the warning window.
struct SubSequence {
  std::string entity_id;
  std::int64_t t_start = 0;  // absolute minute of OW start
  IndexRange ow;             // indices into the parent series
  IndexRange tw;
};

struct FilterStats {
  std::size_t replaced = 0;
};

// Replaces raw-signal values outside [lo, hi] with the missing marker.
// Derived signals are left untouched. Idempotent.
EntitySeries filter_outliers(EntitySeries s, double lo = 10.0, double hi = 200.0,
                             FilterStats* stats = nullptr);

// Adds PP = SBP - DBP and CO = HR * PP; a missing operand makes the result
// missing. Requires HR, SBP, DBP.
EntitySeries derive_signals(EntitySeries s);

// Sub-sequences at t = 0, stride, 2*stride, ... keeping only full spans.
std::vector<SubSequence> make_subsequences(const EntitySeries& series, const WindowConfig& cfg,
                                           int stride);

inline std::span<const double> slice(const EntitySeries& s, SignalKind k, IndexRange r) {
  const auto& v = s.values(k);
  return std::span<const double>(v.data() + r.begin, r.size());
}

}  // namespace ew
