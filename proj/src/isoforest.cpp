#include "ew/isoforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ew/rng.hpp"
#include "ew/util.hpp"

namespace ew {
namespace {

struct TreeBuilder {
  MatrixView x;
  int height_limit;
  Rng* rng;
  std::vector<IsoNode> nodes;

  int build(std::vector<std::uint32_t>& rows, std::size_t lo, std::size_t hi, int depth) {
    std::size_t count = hi - lo;
    if (depth >= height_limit || count <= 1) return emit_external(count);

    // candidate features with spread
    std::vector<std::size_t> candidates;
    std::vector<double> mins(x.cols), maxs(x.cols);
    for (std::size_t f = 0; f < x.cols; ++f) {
      double mn = x.data[rows[lo] * x.cols + f];
      double mx = mn;
      for (std::size_t i = lo + 1; i < hi; ++i) {
        double v = x.data[rows[i] * x.cols + f];
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      mins[f] = mn;
      maxs[f] = mx;
      if (mx > mn) candidates.push_back(f);
    }
    if (candidates.empty()) return emit_external(count);

    std::size_t f = candidates[rng->below(candidates.size())];
    double split = mins[f] + rng->uniform() * (maxs[f] - mins[f]);
    if (!(split > mins[f]) || !(split < maxs[f])) return emit_external(count);

    auto mid_it = std::partition(rows.begin() + static_cast<std::ptrdiff_t>(lo),
                                 rows.begin() + static_cast<std::ptrdiff_t>(hi),
                                 [&](std::uint32_t r) { return x.data[r * x.cols + f] < split; });
    std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());
    if (mid == lo || mid == hi) return emit_external(count);

    int id = static_cast<int>(nodes.size());
    nodes.push_back(IsoNode{static_cast<int>(f), split, -1, -1, 0, 0.0});
    int left = build(rows, lo, mid, depth + 1);
    int right = build(rows, mid, hi, depth + 1);
    nodes[static_cast<std::size_t>(id)].left = left;
    nodes[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  int emit_external(std::size_t count) {
    int id = static_cast<int>(nodes.size());
    nodes.push_back(
        IsoNode{-1, 0.0, -1, -1, static_cast<int>(count), average_path_length(static_cast<int>(count))});
    return id;
  }
};

}  // namespace

void IsoForestParams::validate() const {
  if (n_trees <= 0 || subsample_size < 2) {
    throw StageError("config", "isolation forest needs n_trees > 0 and subsample_size >= 2");
  }
}

double average_path_length(int n) {
  if (n <= 1) return 0.0;
  double h = 0.0;
  for (int i = 1; i <= n - 1; ++i) h += 1.0 / static_cast<double>(i);
  return 2.0 * h - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

double IsoTree::path_length(std::span<const double> row) const {
  int i = 0;
  double depth = 0.0;
  while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
    const IsoNode& n = nodes[static_cast<std::size_t>(i)];
    i = row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    depth += 1.0;
  }
  return depth + nodes[static_cast<std::size_t>(i)].adjust;
}

double IsoForestModel::score(std::span<const double> row) const {
  if (row.size() != n_features) {
    throw StageError("predict", "feature vector width does not match isolation forest");
  }
  double mean_path = 0.0;
  for (const auto& t : trees) mean_path += t.path_length(row);
  mean_path /= static_cast<double>(trees.size());
  return std::pow(2.0, -mean_path / normalizer);
}

IsoForestModel isoforest_fit(MatrixView x, const IsoForestParams& params) {
  params.validate();
  if (x.rows < 2) throw StageError("train", "isolation forest needs at least 2 rows");
  IsoForestModel model;
  model.n_features = x.cols;
  model.subsample_used = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(params.subsample_size), x.rows));
  model.normalizer = average_path_length(model.subsample_used);
  int height_limit =
      static_cast<int>(std::ceil(std::log2(static_cast<double>(model.subsample_used))));

  Rng master(params.rng_seed);
  std::vector<std::uint32_t> all(x.rows);
  std::iota(all.begin(), all.end(), 0u);
  model.trees.resize(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    Rng rng = master.fork(static_cast<std::uint64_t>(t));
    std::vector<std::uint32_t> rows = all;
    std::size_t psi = static_cast<std::size_t>(model.subsample_used);
    for (std::size_t i = 0; i < psi; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(rows.size() - i));
      std::swap(rows[i], rows[j]);
    }
    rows.resize(psi);
    TreeBuilder builder{x, height_limit, &rng, {}};
    builder.build(rows, 0, rows.size(), 0);
    model.trees[static_cast<std::size_t>(t)].nodes = std::move(builder.nodes);
  }
  return model;
}

}  // namespace ew
