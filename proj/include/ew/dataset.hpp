#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ew {

struct MatrixView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data + i * cols, cols);
  }
};

// Labeled feature matrix with entity/time provenance. y_s/y_f are present for
// layered tasks (y_f = -1 means NA); t = -1 marks synthetic rows created by
// resampling.
struct Dataset {
  std::size_t n_cols = 0;
  std::vector<double> x;  // row-major
  std::vector<std::int8_t> y;
  std::vector<std::int8_t> y_s;
  std::vector<std::int8_t> y_f;
  std::vector<std::uint32_t> group;
  std::vector<std::string> group_names;
  std::vector<std::int64_t> t;

  std::size_t rows() const { return n_cols == 0 ? 0 : x.size() / n_cols; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(x.data() + i * n_cols, n_cols);
  }
  double* row_mut(std::size_t i) { return x.data() + i * n_cols; }
  MatrixView view() const { return {x.data(), rows(), n_cols}; }

  bool has_layered_labels() const { return y_s.size() == y.size() && y_f.size() == y.size(); }
  void validate() const;

  // Row copy including labels/provenance; both datasets must agree on n_cols.
  void append_row_from(const Dataset& src, std::size_t i);
};

// Versioned binary cache: magic "EWFC", little-endian, schema names embedded.
void write_dataset_cache(const std::string& path, const Dataset& ds,
                         const std::vector<std::string>& schema);
Dataset read_dataset_cache(const std::string& path, std::vector<std::string>* schema_out = nullptr);

// CSV export with a schema header row; missing entries are empty fields.
void write_dataset_csv(const std::string& path, const Dataset& ds,
                       const std::vector<std::string>& schema);

}  // namespace ew
