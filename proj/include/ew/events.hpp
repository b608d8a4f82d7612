#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ew/series.hpp"

namespace ew {

enum class Comparator { Below, Above };

const char* to_string(Comparator c);

// Exact rational threshold, e.g. 90% = 9/10. Proportion comparisons are done
// in integer arithmetic so 27/30 passes and 26/30 fails with no float fuzz.
struct Fraction {
  std::int64_t num = 9;
  std::int64_t den = 10;
};

struct EventSpec {
  SignalKind signal = SignalKind::MAP;
  Comparator comparator = Comparator::Below;
  double level = 60.0;
  Fraction fraction{9, 10};
  int window_minutes = 30;

  void validate() const;
  bool satisfies(double value) const {
    return comparator == Comparator::Below ? value < level : value > level;
  }
};

// Main event plus its relaxed pre-conditional. Construction validates that
// the pre-conditional is implied by the main event: same signal, same
// comparator, same window, and exactly one of {lower fraction at the same
// level, weaker level at the same fraction}.
struct LayeredEventSpec {
  EventSpec main;
  EventSpec pre;

  static LayeredEventSpec checked(EventSpec main, EventSpec pre);
};

// y: main event in TW. y_s: pre-conditional in TW. y_f: main event given the
// pre-conditional happened; -1 (NA) whenever y_s = 0.
struct LabelTriple {
  std::uint8_t y = 0;
  std::uint8_t y_s = 0;
  std::int8_t y_f = -1;

  bool consistent() const {
    if (y == 1 && y_s != 1) return false;
    if (y_s == 0) return y == 0 && y_f == -1;
    return y_f == static_cast<std::int8_t>(y);
  }
};

enum class DropReason {
  None,
  TooManyMissing,  // > 10% of the TW's target-signal minutes missing
};

struct LabelResult {
  LabelTriple label;
  DropReason drop = DropReason::None;
  bool ok() const { return drop == DropReason::None; }
};

// True iff (#present values satisfying the comparator) / (#present values)
// >= fraction, compared exactly. Throws on an all-missing window; callers in
// the labeling path apply the missingness guard first.
bool window_is_event(std::span<const double> window, const EventSpec& spec);

LabelResult label_window(std::span<const double> tw_values, const LayeredEventSpec& spec);

LabelResult label_subsequence(const EntitySeries& series, const SubSequence& ss,
                              const LayeredEventSpec& spec);

// Maximal run of qualifying window starts, merged: [onset, end) where end is
// the last qualifying start plus the window length.
struct Episode {
  std::int64_t onset = 0;
  std::int64_t end = 0;
};

// Onsets of merged episodes in absolute minutes. A window qualifies when it
// passes the same missingness guard used for labeling and window_is_event is
// true over its present values.
std::vector<Episode> extract_event_onsets(const EntitySeries& series, const EventSpec& spec);

}  // namespace ew
