#include "ew/threshold.hpp"

#include <algorithm>
#include <vector>

#include "ew/util.hpp"

namespace ew {

double balanced_accuracy(std::span<const double> scores, std::span<const std::int8_t> labels,
                         double threshold) {
  std::size_t tp = 0, tn = 0, pos = 0, neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    bool pred = scores[i] >= threshold;
    if (labels[i] == 1) {
      ++pos;
      if (pred) ++tp;
    } else {
      ++neg;
      if (!pred) ++tn;
    }
  }
  double recall = pos ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0;
  double specificity = neg ? static_cast<double>(tn) / static_cast<double>(neg) : 0.0;
  return 0.5 * (recall + specificity);
}

double tune_threshold(std::span<const double> scores, std::span<const std::int8_t> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw StageError("tune", "scores and labels must be non-empty and aligned");
  }
  std::size_t pos = 0, neg = 0;
  for (std::int8_t l : labels) (l == 1 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) {
    throw StageError("tune", "threshold tuning requires both classes");
  }

  // (score, label) sorted ascending; sweep keeps counts strictly below t.
  std::vector<std::pair<double, std::int8_t>> pts(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) pts[i] = {scores[i], labels[i]};
  std::sort(pts.begin(), pts.end());

  std::vector<double> candidates;
  candidates.push_back(0.0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].first < pts[i + 1].first) {
      double mid = pts[i].first + 0.5 * (pts[i + 1].first - pts[i].first);
      if (mid > pts[i].first && mid <= pts[i + 1].first) candidates.push_back(mid);
    }
  }
  candidates.push_back(1.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_t = candidates.front();
  double best_score = -1.0;
  std::size_t i = 0, pos_below = 0, neg_below = 0;
  for (double t : candidates) {
    while (i < pts.size() && pts[i].first < t) {
      (pts[i].second == 1 ? pos_below : neg_below) += 1;
      ++i;
    }
    double recall = static_cast<double>(pos - pos_below) / static_cast<double>(pos);
    double specificity = static_cast<double>(neg_below) / static_cast<double>(neg);
    double ba = 0.5 * (recall + specificity);
    if (ba >= best_score) {  // >= keeps the highest tied threshold
      best_score = ba;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace ew
