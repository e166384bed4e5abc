#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "btrank/errors.hpp"

namespace btrank {

using CountMatrix =
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct ComparisonRecord {
  std::string winner;
  std::string loser;
  std::int64_t count = 1;
};

// Pairwise comparison counts over n labeled objects: wins()(i, j) is the
// number of times object i beat object j. Immutable after construction, so
// instances can be shared across threads freely.
class ComparisonData {
 public:
  // Validates: n >= 2, labels distinct and nonempty, W square nonnegative
  // with zero diagonal, at least one comparison overall.
  ComparisonData(std::vector<std::string> labels, CountMatrix wins);

  int n() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }
  std::optional<int> index_of(std::string_view label) const;

  const CountMatrix& wins() const { return wins_; }
  // V = W + W^T: symmetric, zero diagonal.
  CountMatrix comparisons() const { return wins_ + wins_.transpose(); }
  // Sum of V over unordered pairs.
  std::int64_t total_comparisons() const { return total_; }
  // Comparisons object i took part in; summed over all objects this double
  // counts, giving 2 * total_comparisons().
  std::int64_t comparisons_for(int i) const;

 private:
  std::vector<std::string> labels_;
  CountMatrix wins_;
  std::int64_t total_ = 0;
};

// Accumulates records into a ComparisonData; labels are deduplicated in
// first-appearance order (winner before loser within a record).
ComparisonData build_comparison_data(
    const std::vector<ComparisonRecord>& records);

}  // namespace btrank
