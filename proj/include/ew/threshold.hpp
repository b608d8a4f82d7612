#pragma once

#include <cstdint>
#include <span>

namespace ew {

// Decision threshold maximizing (recall + specificity) / 2. Candidates are 0,
// the midpoints between consecutive distinct scores, and 1; ties go to the
// higher threshold (fewer alarms). A score is positive when score >= t.
// Throws when labels contain a single class.
double tune_threshold(std::span<const double> scores, std::span<const std::int8_t> labels);

// Balanced accuracy of the rule score >= t.
double balanced_accuracy(std::span<const double> scores, std::span<const std::int8_t> labels,
                         double threshold);

}  // namespace ew
