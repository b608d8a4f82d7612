#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ew/dataset.hpp"

namespace ew {

struct IsoForestParams {
  int n_trees = 100;
  int subsample_size = 256;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// feature < 0 marks an external node holding `size` training points; adjust
// caches the average-path correction c(size).
struct IsoNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;
  double adjust = 0.0;
};

struct IsoTree {
  std::vector<IsoNode> nodes;
  double path_length(std::span<const double> row) const;
};

struct IsoForestModel {
  std::size_t n_features = 0;
  int subsample_used = 0;
  double normalizer = 0.0;  // c(subsample_used)
  std::vector<IsoTree> trees;

  // Anomaly score in (0, 1): 2^(-E[h(x)] / c(n)).
  double score(std::span<const double> row) const;
};

// c(n) = 2 H(n-1) - 2 (n-1)/n with the exact harmonic number; c(n<=1) = 0.
double average_path_length(int n);

IsoForestModel isoforest_fit(MatrixView x, const IsoForestParams& params);

}  // namespace ew
