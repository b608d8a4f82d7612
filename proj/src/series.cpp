#include "ew/series.hpp"

#include "ew/util.hpp"

namespace ew {

const char* to_string(SignalKind k) {
  switch (k) {
    case SignalKind::HR: return "HR";
    case SignalKind::SBP: return "SBP";
    case SignalKind::DBP: return "DBP";
    case SignalKind::MAP: return "MAP";
    case SignalKind::CO: return "CO";
    case SignalKind::PP: return "PP";
  }
  return "?";
}

std::optional<SignalKind> signal_from_string(std::string_view name) {
  for (SignalKind k : kAllSignals) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::size_t EntitySeries::length() const {
  for (const auto& v : signals) {
    if (!v.empty()) return v.size();
  }
  return 0;
}

void EntitySeries::validate() const {
  std::size_t len = length();
  if (len == 0) throw StageError("series", "entity " + entity_id + " has no signal data");
  for (SignalKind k : kAllSignals) {
    if (has(k) && values(k).size() != len) {
      throw StageError("series", "entity " + entity_id + " signal " + to_string(k) +
                                     " length mismatch");
    }
  }
}

void WindowConfig::validate() const {
  if (ow_minutes <= 0 || tw_minutes <= 0 || ww_minutes < 0) {
    throw StageError("config", "window sizes must satisfy ow>0, tw>0, ww>=0");
  }
  if (train_stride_minutes < 1 || eval_stride_minutes < 1) {
    throw StageError("config", "strides must be >= 1");
  }
}

EntitySeries filter_outliers(EntitySeries s, double lo, double hi, FilterStats* stats) {
  if (!(lo < hi)) throw StageError("series", "filter_outliers requires lo < hi");
  std::size_t replaced = 0;
  for (SignalKind k : kAllSignals) {
    if (is_derived(k) || !s.has(k)) continue;
    for (double& v : s.values(k)) {
      if (is_missing(v)) continue;
      if (v < lo || v > hi) {  // closed interval survives
        v = kMissing;
        ++replaced;
      }
    }
  }
  if (stats) stats->replaced = replaced;
  return s;
}

EntitySeries derive_signals(EntitySeries s) {
  for (SignalKind k : {SignalKind::HR, SignalKind::SBP, SignalKind::DBP}) {
    if (!s.has(k)) {
      throw StageError("series", "derive_signals: required signal " + std::string(to_string(k)) +
                                     " absent in entity " + s.entity_id);
    }
  }
  std::size_t n = s.length();
  const auto& hr = s.values(SignalKind::HR);
  const auto& sbp = s.values(SignalKind::SBP);
  const auto& dbp = s.values(SignalKind::DBP);
  std::vector<double> pp(n, kMissing);
  std::vector<double> co(n, kMissing);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_missing(sbp[i]) || is_missing(dbp[i])) continue;
    pp[i] = sbp[i] - dbp[i];
    if (!is_missing(hr[i])) co[i] = hr[i] * pp[i];
  }
  s.values(SignalKind::PP) = std::move(pp);
  s.values(SignalKind::CO) = std::move(co);
  return s;
}

std::vector<SubSequence> make_subsequences(const EntitySeries& series, const WindowConfig& cfg,
                                           int stride) {
  cfg.validate();
  if (stride < 1) throw StageError("series", "stride must be >= 1");
  std::vector<SubSequence> out;
  std::size_t len = series.length();
  std::size_t span = static_cast<std::size_t>(cfg.span_minutes());
  if (len < span) return out;
  std::size_t ow = static_cast<std::size_t>(cfg.ow_minutes);
  std::size_t ww = static_cast<std::size_t>(cfg.ww_minutes);
  std::size_t tw = static_cast<std::size_t>(cfg.tw_minutes);
  for (std::size_t t = 0; t + span <= len; t += static_cast<std::size_t>(stride)) {
    SubSequence ss;
    ss.entity_id = series.entity_id;
    ss.t_start = series.start_time + static_cast<std::int64_t>(t);
    ss.ow = {t, t + ow};
    ss.tw = {t + ow + ww, t + ow + ww + tw};
    out.push_back(std::move(ss));
  }
  return out;
}

}  // namespace ew
