#include "ew/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ew/rng.hpp"
#include "ew/util.hpp"

namespace ew {
namespace {

constexpr std::uint32_t kNoNode = 0xffffffffu;
constexpr double kLeafClip = 8.0;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Numerically stable logistic deviance: log(1 + e^F) - y*F.
double logistic_term(double f, double y) {
  double a = std::max(f, 0.0);
  return a + std::log1p(std::exp(-std::abs(f))) - y * f;
}

struct BuildNode {
  std::size_t count = 0;
  double sum = 0.0;
  int depth = 0;
  // best split found so far
  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  // sweep state for the current feature
  std::size_t left_count = 0;
  double left_sum = 0.0;
  double prev_value = 0.0;
  bool has_prev = false;
  int tree_index = -1;  // position in the emitted tree
};

}  // namespace

void GbtParams::validate() const {
  if (n_trees <= 0 || max_depth <= 0 || min_leaf <= 0) {
    throw StageError("config", "gbt n_trees, max_depth, min_leaf must be positive");
  }
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw StageError("config", "gbt learning_rate must be in (0, 1]");
  }
  if (!(subsample_ratio > 0.0 && subsample_ratio <= 1.0)) {
    throw StageError("config", "gbt subsample_ratio must be in (0, 1]");
  }
}

double GbtModel::predict_score(std::span<const double> row) const {
  if (row.size() != n_features) {
    throw StageError("predict", "feature vector width " + std::to_string(row.size()) +
                                    " does not match model width " + std::to_string(n_features));
  }
  double f = base_score;
  for (const auto& t : trees) f += t.predict(row);
  return f;
}

double GbtModel::predict_proba(std::span<const double> row) const {
  double f = predict_score(row);
  return loss == GbtLoss::Logistic ? sigmoid(f) : f;
}

double gbt_train_loss(const GbtModel& model, MatrixView x, std::span<const double> targets) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    double f = model.predict_score(x.row(i));
    acc += model.loss == GbtLoss::Logistic ? logistic_term(f, targets[i])
                                           : 0.5 * (targets[i] - f) * (targets[i] - f);
  }
  return acc / static_cast<double>(x.rows);
}

GbtModel gbt_fit_values(MatrixView x, std::span<const double> targets, const GbtParams& params,
                        GbtLoss loss, GbtFitInfo* info) {
  params.validate();
  std::size_t n = x.rows, d = x.cols;
  if (n < 2) throw StageError("train", "gbt needs at least 2 rows");
  if (targets.size() != n) throw StageError("train", "target length mismatch");

  GbtModel model;
  model.loss = loss;
  model.n_features = d;
  if (loss == GbtLoss::Logistic) {
    double p = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(n);
    if (p <= 0.0 || p >= 1.0) {
      throw StageError("train", "logistic gbt requires both classes in the training data");
    }
    model.base_score = std::log(p / (1.0 - p));
  } else {
    model.base_score = std::accumulate(targets.begin(), targets.end(), 0.0) /
                       static_cast<double>(n);
  }

  // Global per-feature sort orders; ties resolved by row index.
  std::vector<std::vector<std::uint32_t>> order(d);
  for (std::size_t f = 0; f < d; ++f) {
    auto& o = order[f];
    o.resize(n);
    std::iota(o.begin(), o.end(), 0u);
    std::sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
      double va = x.data[a * d + f], vb = x.data[b * d + f];
      if (va != vb) return va < vb;
      return a < b;
    });
  }

  std::vector<double> score(n, model.base_score);
  std::vector<double> grad(n), hess(n);
  std::vector<std::uint32_t> node_of(n);
  std::vector<std::uint32_t> sample(n);
  std::iota(sample.begin(), sample.end(), 0u);
  std::size_t sample_size =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(
                                   params.subsample_ratio * static_cast<double>(n))));
  sample_size = std::min(sample_size, n);

  Rng rng(params.rng_seed);
  double current_loss = 0.0;
  {
    GbtModel empty = model;
    current_loss = gbt_train_loss(empty, x, targets);
  }
  if (info) {
    info->train_loss.clear();
    info->dropped_rounds = 0;
  }

  for (int round = 0; round < params.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      if (loss == GbtLoss::Logistic) {
        double p = sigmoid(score[i]);
        grad[i] = targets[i] - p;
        hess[i] = std::max(p * (1.0 - p), 1e-12);
      } else {
        grad[i] = targets[i] - score[i];
        hess[i] = 1.0;
      }
    }

    // Row subsample for this round.
    std::fill(node_of.begin(), node_of.end(), kNoNode);
    if (sample_size == n) {
      std::fill(node_of.begin(), node_of.end(), 0u);
    } else {
      for (std::size_t i = 0; i < sample_size; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(sample[i], sample[j]);
      }
      for (std::size_t i = 0; i < sample_size; ++i) node_of[sample[i]] = 0u;
    }

    std::vector<BuildNode> nodes(1);
    nodes[0].depth = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (node_of[i] == 0u) {
        nodes[0].count += 1;
        nodes[0].sum += grad[i];
      }
    }

    std::vector<std::uint32_t> frontier{0};
    std::size_t min_leaf = static_cast<std::size_t>(params.min_leaf);
    while (!frontier.empty()) {
      for (std::uint32_t id : frontier) {
        nodes[id].best_gain = 0.0;
        nodes[id].best_feature = -1;
      }
      bool depth_ok = nodes[frontier[0]].depth < params.max_depth;
      if (depth_ok) {
        for (std::size_t f = 0; f < d; ++f) {
          for (std::uint32_t id : frontier) {
            nodes[id].left_count = 0;
            nodes[id].left_sum = 0.0;
            nodes[id].has_prev = false;
          }
          for (std::uint32_t row : order[f]) {
            std::uint32_t id = node_of[row];
            if (id == kNoNode || id >= nodes.size()) continue;
            BuildNode& nd = nodes[id];
            if (nd.depth != nodes[frontier[0]].depth) continue;
            double v = x.data[row * d + f];
            if (nd.has_prev && v > nd.prev_value && nd.left_count >= min_leaf &&
                nd.count - nd.left_count >= min_leaf) {
              double thr = nd.prev_value + 0.5 * (v - nd.prev_value);
              if (nd.prev_value < thr && thr <= v) {
                double cl = static_cast<double>(nd.left_count);
                double cr = static_cast<double>(nd.count - nd.left_count);
                double sl = nd.left_sum;
                double sr = nd.sum - sl;
                double gain = sl * sl / cl + sr * sr / cr -
                              nd.sum * nd.sum / static_cast<double>(nd.count);
                if (gain > nd.best_gain + 1e-12) {
                  nd.best_gain = gain;
                  nd.best_feature = static_cast<int>(f);
                  nd.best_threshold = thr;
                }
              }
            }
            nd.left_count += 1;
            nd.left_sum += grad[row];
            nd.prev_value = v;
            nd.has_prev = true;
          }
        }
      }

      std::vector<std::uint32_t> next;
      for (std::uint32_t id : frontier) {
        BuildNode& nd = nodes[id];
        if (nd.best_feature < 0) continue;
        std::uint32_t left_id = static_cast<std::uint32_t>(nodes.size());
        std::uint32_t right_id = left_id + 1;
        nodes.push_back(BuildNode{});
        nodes.push_back(BuildNode{});
        nodes[left_id].depth = nodes[id].depth + 1;
        nodes[right_id].depth = nodes[id].depth + 1;
        next.push_back(left_id);
        next.push_back(right_id);
        // nd reference may be invalidated by push_back; reload
        BuildNode& parent = nodes[id];
        parent.tree_index = -2;  // internal marker, resolved on emit
        for (std::size_t i = 0; i < n; ++i) {
          if (node_of[i] != id) continue;
          std::uint32_t child =
              x.data[i * d + static_cast<std::size_t>(parent.best_feature)] <
                      parent.best_threshold
                  ? left_id
                  : right_id;
          node_of[i] = child;
          nodes[child].count += 1;
          nodes[child].sum += grad[i];
        }
      }
      frontier = std::move(next);
    }

    // Leaf values: one-step Newton (sum grad / sum hess), shrunk.
    std::vector<double> leaf_sum_h(nodes.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (node_of[i] != kNoNode) leaf_sum_h[node_of[i]] += hess[i];
    }
    std::vector<double> leaf_value(nodes.size(), 0.0);
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      if (nodes[id].tree_index == -2 || nodes[id].count == 0) continue;
      double denom = loss == GbtLoss::Logistic ? std::max(leaf_sum_h[id], 1e-12)
                                               : static_cast<double>(nodes[id].count);
      double v = nodes[id].sum / denom;
      v = std::clamp(v, -kLeafClip, kLeafClip);
      leaf_value[id] = v * params.learning_rate;
    }

    // Emit the tree.
    GbtTree tree;
    tree.nodes.reserve(nodes.size());
    std::vector<int> emitted(nodes.size(), -1);
    // BFS from root preserving build order (build ids are already BFS).
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      GbtNode gn;
      if (nodes[id].tree_index == -2) {
        gn.feature = nodes[id].best_feature;
        gn.threshold = nodes[id].best_threshold;
      } else {
        gn.leaf = leaf_value[id];
      }
      emitted[id] = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(gn);
    }
    // children follow their parent in build order; fix up links
    {
      std::size_t next_child = 1;
      for (std::size_t id = 0; id < nodes.size(); ++id) {
        if (nodes[id].tree_index != -2) continue;
        tree.nodes[static_cast<std::size_t>(emitted[id])].left = emitted[next_child];
        tree.nodes[static_cast<std::size_t>(emitted[id])].right = emitted[next_child + 1];
        next_child += 2;
      }
    }

    // Accept only if training loss does not increase; halve on failure.
    std::vector<double> contrib(n);
    for (std::size_t i = 0; i < n; ++i) contrib[i] = tree.predict(x.row(i));
    bool accepted = false;
    for (int attempt = 0; attempt < 7; ++attempt) {
      double new_loss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double fnew = score[i] + contrib[i];
        new_loss += loss == GbtLoss::Logistic
                        ? logistic_term(fnew, targets[i])
                        : 0.5 * (targets[i] - fnew) * (targets[i] - fnew);
      }
      new_loss /= static_cast<double>(n);
      if (new_loss <= current_loss + 1e-15) {
        for (std::size_t i = 0; i < n; ++i) score[i] += contrib[i];
        current_loss = new_loss;
        model.trees.push_back(std::move(tree));
        if (info) info->train_loss.push_back(current_loss);
        accepted = true;
        break;
      }
      for (auto& gn : tree.nodes) gn.leaf *= 0.5;
      for (std::size_t i = 0; i < n; ++i) contrib[i] *= 0.5;
    }
    if (!accepted && info) info->dropped_rounds += 1;
  }
  return model;
}

GbtModel gbt_fit(const Dataset& ds, const GbtParams& params, GbtLoss loss, GbtFitInfo* info) {
  std::vector<double> targets(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i) targets[i] = static_cast<double>(ds.y[i]);
  return gbt_fit_values(ds.view(), targets, params, loss, info);
}

}  // namespace ew
