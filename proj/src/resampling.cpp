#include "ew/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ew/rng.hpp"
#include "ew/util.hpp"

namespace ew {
namespace {

struct ClassSplit {
  std::vector<std::size_t> minority;
  std::vector<std::size_t> majority;
  std::int8_t minority_label = 1;
};

ClassSplit split_classes(const Dataset& ds, const char* strategy) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    (ds.y[i] == 1 ? pos : neg).push_back(i);
  }
  if (pos.empty() || neg.empty()) {
    throw StageError("resample",
                     std::string(strategy) + " requires both classes in the training data");
  }
  ClassSplit s;
  if (pos.size() <= neg.size()) {
    s.minority = std::move(pos);
    s.majority = std::move(neg);
    s.minority_label = 1;
  } else {
    s.minority = std::move(neg);
    s.majority = std::move(pos);
    s.minority_label = 0;
  }
  return s;
}

Dataset subset(const Dataset& ds, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  Dataset out;
  out.n_cols = ds.n_cols;
  out.group_names = ds.group_names;
  for (std::size_t i : keep) out.append_row_from(ds, i);
  return out;
}

// Column-standardized copy used only for distance computations.
std::vector<double> standardized(const Dataset& ds) {
  std::size_t n = ds.rows(), d = ds.n_cols;
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = ds.row(i);
    for (std::size_t c = 0; c < d; ++c) mean[c] += r[c];
  }
  for (std::size_t c = 0; c < d; ++c) mean[c] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = ds.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      double dv = r[c] - mean[c];
      sd[c] += dv * dv;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    sd[c] = std::sqrt(sd[c] / static_cast<double>(n));
    if (sd[c] == 0.0) sd[c] = 1.0;
  }
  std::vector<double> z(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = ds.row(i);
    for (std::size_t c = 0; c < d; ++c) z[i * d + c] = (r[c] - mean[c]) / sd[c];
  }
  return z;
}

double sqdist(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    double dv = a[c] - b[c];
    acc += dv * dv;
  }
  return acc;
}

// k nearest rows of `pool` to query row q (pool indices are dataset row ids;
// q itself is skipped). Ties break toward the lowest row index because pool
// is scanned in ascending order with strict improvement.
std::vector<std::size_t> knn(const std::vector<double>& z, std::size_t d, std::size_t q,
                             const std::vector<std::size_t>& pool, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> best;  // (dist, row), kept sorted
  for (std::size_t row : pool) {
    if (row == q) continue;
    double dist = sqdist(&z[q * d], &z[row * d], d);
    if (best.size() < k) {
      best.emplace_back(dist, row);
      std::sort(best.begin(), best.end());
    } else if (dist < best.back().first) {
      best.back() = {dist, row};
      std::sort(best.begin(), best.end());
    }
  }
  std::vector<std::size_t> out;
  out.reserve(best.size());
  for (auto& [dist, row] : best) out.push_back(row);
  return out;
}

void append_interpolated(Dataset& out, const Dataset& ds, std::size_t seed_row,
                         std::size_t neighbor_row, double u) {
  std::size_t d = ds.n_cols;
  auto a = ds.row(seed_row);
  auto b = ds.row(neighbor_row);
  for (std::size_t c = 0; c < d; ++c) out.x.push_back(a[c] + u * (b[c] - a[c]));
  out.y.push_back(ds.y[seed_row]);
  if (ds.has_layered_labels()) {
    out.y_s.push_back(ds.y_s[seed_row]);
    out.y_f.push_back(ds.y_f[seed_row]);
  }
  out.group.push_back(ds.group[seed_row]);
  out.t.push_back(-1);  // synthetic
}

Dataset oversample_synthetic(const Dataset& ds, std::uint64_t seed, bool adaptive) {
  ClassSplit cs = split_classes(ds, adaptive ? "ADASYN" : "SMOTE");
  std::size_t n_min = cs.minority.size();
  if (n_min < 2) {
    throw StageError("resample", "synthetic oversampling needs at least 2 minority rows");
  }
  std::size_t budget = cs.majority.size() - n_min;
  Dataset out = ds;
  if (budget == 0) return out;

  std::size_t d = ds.n_cols;
  std::vector<double> z = standardized(ds);
  std::size_t k = std::min<std::size_t>(5, n_min - 1);

  std::vector<std::vector<std::size_t>> minority_nn(n_min);
  for (std::size_t m = 0; m < n_min; ++m) {
    minority_nn[m] = knn(z, d, cs.minority[m], cs.minority, k);
  }

  // Per-minority-point generation counts. SMOTE spreads the budget evenly;
  // ADASYN weights points by the majority share among their all-class
  // neighbors, falling back to the even spread when no minority point has a
  // majority neighbor.
  std::vector<std::size_t> counts(n_min, 0);
  bool even = !adaptive;
  if (adaptive) {
    std::vector<std::size_t> all(ds.rows());
    std::iota(all.begin(), all.end(), 0);
    std::size_t k_all = std::min<std::size_t>(5, ds.rows() - 1);
    std::vector<double> ratio(n_min, 0.0);
    double total = 0.0;
    for (std::size_t m = 0; m < n_min; ++m) {
      auto nn = knn(z, d, cs.minority[m], all, k_all);
      std::size_t maj = 0;
      for (std::size_t row : nn) {
        if (ds.y[row] != cs.minority_label) ++maj;
      }
      ratio[m] = static_cast<double>(maj) / static_cast<double>(nn.size());
      total += ratio[m];
    }
    if (total <= 0.0) {
      even = true;
    } else {
      // floor allocation, remainders to the largest fractional parts
      std::vector<std::pair<double, std::size_t>> frac(n_min);
      std::size_t assigned = 0;
      for (std::size_t m = 0; m < n_min; ++m) {
        double exact = ratio[m] / total * static_cast<double>(budget);
        counts[m] = static_cast<std::size_t>(exact);
        assigned += counts[m];
        frac[m] = {exact - static_cast<double>(counts[m]), m};
      }
      std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      for (std::size_t r = 0; assigned < budget && r < n_min; ++r, ++assigned) {
        ++counts[frac[r].second];
      }
    }
  }
  if (even) {
    for (std::size_t g = 0; g < budget; ++g) ++counts[g % n_min];
  }

  Rng rng(Rng::mix(seed, adaptive ? 0xada5u : 0x5307eu));
  for (std::size_t m = 0; m < n_min; ++m) {
    for (std::size_t g = 0; g < counts[m]; ++g) {
      std::size_t nb = minority_nn[m][rng.below(minority_nn[m].size())];
      append_interpolated(out, ds, cs.minority[m], nb, rng.uniform());
    }
  }
  return out;
}

Dataset tomek_links(const Dataset& ds) {
  split_classes(ds, "TOMEK");  // precondition: both classes
  std::size_t n = ds.rows(), d = ds.n_cols;
  std::vector<double> z = standardized(ds);
  std::vector<std::size_t> nn(n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < n; ++i) nn[i] = knn(z, d, i, all, 1)[0];

  std::vector<bool> drop(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = nn[i];
    if (j > i && nn[j] == i && ds.y[i] != ds.y[j]) {
      drop[i] = true;
      drop[j] = true;
    }
  }
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  return subset(ds, std::move(keep));
}

}  // namespace

const char* to_string(Resampling r) {
  switch (r) {
    case Resampling::NR: return "NR";
    case Resampling::RU: return "RU";
    case Resampling::RO: return "RO";
    case Resampling::SMOTE: return "SMOTE";
    case Resampling::ADASYN: return "ADASYN";
    case Resampling::TOMEK: return "TOMEK";
  }
  return "?";
}

std::optional<Resampling> resampling_from_string(std::string_view name) {
  for (Resampling r : {Resampling::NR, Resampling::RU, Resampling::RO, Resampling::SMOTE,
                       Resampling::ADASYN, Resampling::TOMEK}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

Dataset resample(const Dataset& ds, Resampling strategy, std::uint64_t seed) {
  ds.validate();
  switch (strategy) {
    case Resampling::NR:
      return ds;
    case Resampling::RU: {
      ClassSplit cs = split_classes(ds, "RU");
      Rng rng(Rng::mix(seed, 0x5bu));
      std::vector<std::size_t> maj = cs.majority;
      rng.shuffle(maj);
      maj.resize(cs.minority.size());
      std::vector<std::size_t> keep = cs.minority;
      keep.insert(keep.end(), maj.begin(), maj.end());
      return subset(ds, std::move(keep));
    }
    case Resampling::RO: {
      ClassSplit cs = split_classes(ds, "RO");
      Rng rng(Rng::mix(seed, 0x50u));
      Dataset out = ds;
      std::size_t extra = cs.majority.size() - cs.minority.size();
      for (std::size_t g = 0; g < extra; ++g) {
        out.append_row_from(ds, cs.minority[rng.below(cs.minority.size())]);
      }
      return out;
    }
    case Resampling::SMOTE:
      return oversample_synthetic(ds, seed, /*adaptive=*/false);
    case Resampling::ADASYN:
      return oversample_synthetic(ds, seed, /*adaptive=*/true);
    case Resampling::TOMEK:
      return tomek_links(ds);
  }
  throw StageError("resample", "unknown strategy");
}

}  // namespace ew
