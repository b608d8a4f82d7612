#include "ew/events.hpp"

#include "ew/util.hpp"

namespace ew {
namespace {

// count/present >= num/den, exactly.
bool meets_fraction(std::int64_t count, std::int64_t present, const Fraction& f) {
  return count * f.den >= f.num * present;
}

// Labeling guard: missing/total > 1/10, exactly.
bool too_many_missing(std::int64_t missing, std::int64_t total) {
  return missing * 10 > total;
}

}  // namespace

const char* to_string(Comparator c) { return c == Comparator::Below ? "BELOW" : "ABOVE"; }

void EventSpec::validate() const {
  if (fraction.num <= 0 || fraction.den <= 0 || fraction.num > fraction.den) {
    throw StageError("config", "event fraction must be in (0, 1]");
  }
  if (window_minutes <= 0) throw StageError("config", "event window_minutes must be positive");
  if (level <= 0.0 || level >= 300.0) {
    throw StageError("config", "event level outside plausible signal range");
  }
}

LayeredEventSpec LayeredEventSpec::checked(EventSpec main, EventSpec pre) {
  main.validate();
  pre.validate();
  if (pre.signal != main.signal || pre.comparator != main.comparator ||
      pre.window_minutes != main.window_minutes) {
    throw StageError("config",
                     "pre-conditional event must share signal, comparator and window with main");
  }
  // a/b <= c/d for positive denominators
  bool fraction_relaxed =
      pre.fraction.num * main.fraction.den <= main.fraction.num * pre.fraction.den;
  bool same_fraction =
      pre.fraction.num * main.fraction.den == main.fraction.num * pre.fraction.den;
  bool level_weaker_or_equal = main.comparator == Comparator::Below ? pre.level >= main.level
                                                                    : pre.level <= main.level;
  bool ok = (fraction_relaxed && pre.level == main.level) ||
            (level_weaker_or_equal && same_fraction);
  if (!ok) {
    throw StageError("config",
                     "pre-conditional event is not implied by the main event: relax either the "
                     "fraction (same level) or the level (same fraction)");
  }
  return LayeredEventSpec{main, pre};
}

bool window_is_event(std::span<const double> window, const EventSpec& spec) {
  if (window.size() != static_cast<std::size_t>(spec.window_minutes)) {
    throw StageError("events", "window length " + std::to_string(window.size()) +
                                   " != spec window_minutes " +
                                   std::to_string(spec.window_minutes));
  }
  std::int64_t present = 0, count = 0;
  for (double v : window) {
    if (is_missing(v)) continue;
    ++present;
    if (spec.satisfies(v)) ++count;
  }
  if (present == 0) throw StageError("events", "window has no present values");
  return meets_fraction(count, present, spec.fraction);
}

LabelResult label_window(std::span<const double> tw_values, const LayeredEventSpec& spec) {
  std::int64_t total = static_cast<std::int64_t>(tw_values.size());
  std::int64_t missing = 0;
  for (double v : tw_values) {
    if (is_missing(v)) ++missing;
  }
  if (too_many_missing(missing, total)) {
    return LabelResult{{}, DropReason::TooManyMissing};
  }
  LabelResult r;
  bool main_hit = window_is_event(tw_values, spec.main);
  bool pre_hit = window_is_event(tw_values, spec.pre);
  r.label.y = main_hit ? 1 : 0;
  r.label.y_s = pre_hit ? 1 : 0;
  r.label.y_f = pre_hit ? static_cast<std::int8_t>(r.label.y) : std::int8_t{-1};
  return r;
}

LabelResult label_subsequence(const EntitySeries& series, const SubSequence& ss,
                              const LayeredEventSpec& spec) {
  return label_window(slice(series, spec.main.signal, ss.tw), spec);
}

std::vector<Episode> extract_event_onsets(const EntitySeries& series, const EventSpec& spec) {
  std::vector<Episode> episodes;
  const auto& v = series.values(spec.signal);
  std::size_t w = static_cast<std::size_t>(spec.window_minutes);
  if (v.size() < w) return episodes;

  // Sliding counts of present and comparator-satisfying values.
  std::int64_t present = 0, count = 0;
  for (std::size_t i = 0; i < w; ++i) {
    if (is_missing(v[i])) continue;
    ++present;
    if (spec.satisfies(v[i])) ++count;
  }
  auto qualifies = [&](std::int64_t pr, std::int64_t ct) {
    std::int64_t total = static_cast<std::int64_t>(w);
    if (too_many_missing(total - pr, total)) return false;
    return pr > 0 && meets_fraction(ct, pr, spec.fraction);
  };

  bool in_run = false;
  std::int64_t run_start = 0, run_last = 0;
  std::size_t n_windows = v.size() - w + 1;
  for (std::size_t t = 0; t < n_windows; ++t) {
    if (t > 0) {
      double out = v[t - 1];
      if (!is_missing(out)) {
        --present;
        if (spec.satisfies(out)) --count;
      }
      double in = v[t + w - 1];
      if (!is_missing(in)) {
        ++present;
        if (spec.satisfies(in)) ++count;
      }
    }
    if (qualifies(present, count)) {
      std::int64_t abs_t = series.start_time + static_cast<std::int64_t>(t);
      if (!in_run) {
        in_run = true;
        run_start = abs_t;
      }
      run_last = abs_t;
    } else if (in_run) {
      episodes.push_back({run_start, run_last + static_cast<std::int64_t>(w)});
      in_run = false;
    }
  }
  if (in_run) episodes.push_back({run_start, run_last + static_cast<std::int64_t>(w)});
  return episodes;
}

}  // namespace ew
