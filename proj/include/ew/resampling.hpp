#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ew/dataset.hpp"

namespace ew {

enum class Resampling { NR, RU, RO, SMOTE, ADASYN, TOMEK };

const char* to_string(Resampling r);
std::optional<Resampling> resampling_from_string(std::string_view name);

// Rebalances a training dataset to a 1:1 class ratio (NR and TOMEK excepted).
// Neighbor searches run on features standardized with this dataset's own
// mean/sd; interpolation happens in the original feature space. Synthetic
// rows inherit the seed row's group and carry t = -1. Deterministic in
// (ds, strategy, seed).
Dataset resample(const Dataset& ds, Resampling strategy, std::uint64_t seed);

}  // namespace ew
