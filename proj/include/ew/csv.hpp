#pragma once

#include <string>
#include <vector>

#include "ew/series.hpp"

namespace ew {

// Corpus CSV: one row per entity-minute, header
//   entity_id,minute,hr,sbp,dbp,map
// Empty fields are missing values. Rows of an entity must be consecutive and
// their minutes contiguous; violations raise a row-numbered error. Entities
// are returned sorted by id so downstream fold assignment is stable.
std::vector<EntitySeries> read_corpus_csv(const std::string& path);

void write_corpus_csv(const std::string& path, const std::vector<EntitySeries>& entities);

}  // namespace ew
