#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ew/dataset.hpp"

namespace ew {

enum class GbtLoss { Logistic, Squared };

struct GbtParams {
  int n_trees = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_leaf = 20;
  double subsample_ratio = 0.8;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Axis-aligned regression tree; leaf values are stored already scaled by the
// learning rate. feature < 0 marks a leaf.
struct GbtNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf = 0.0;
};

struct GbtTree {
  std::vector<GbtNode> nodes;

  double predict(std::span<const double> row) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const GbtNode& n = nodes[static_cast<std::size_t>(i)];
      i = row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].leaf;
  }
};

struct GbtModel {
  GbtLoss loss = GbtLoss::Logistic;
  double base_score = 0.0;
  std::size_t n_features = 0;
  std::uint64_t schema_hash = 0;  // 0 = unchecked
  std::vector<GbtTree> trees;

  double predict_score(std::span<const double> row) const;  // raw additive score
  double predict_proba(std::span<const double> row) const;  // sigmoid for logistic, raw otherwise
};

struct GbtFitInfo {
  std::vector<double> train_loss;  // after each accepted round
  int dropped_rounds = 0;
};

// Stagewise first-order boosting with shrinkage and row subsampling. A round
// whose tree would increase the training loss has its leaves halved, and is
// dropped entirely if that does not help, so the recorded loss curve is
// non-increasing.
GbtModel gbt_fit_values(MatrixView x, std::span<const double> targets, const GbtParams& params,
                        GbtLoss loss, GbtFitInfo* info = nullptr);

// Classification/regression on a labeled dataset; Logistic requires both
// classes.
GbtModel gbt_fit(const Dataset& ds, const GbtParams& params, GbtLoss loss,
                 GbtFitInfo* info = nullptr);

double gbt_train_loss(const GbtModel& model, MatrixView x, std::span<const double> targets);

}  // namespace ew
