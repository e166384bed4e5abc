#include "btrank/comparison_data.hpp"

#include <unordered_map>
#include <utility>

namespace btrank {

ComparisonData::ComparisonData(std::vector<std::string> labels,
                               CountMatrix wins)
    : labels_(std::move(labels)), wins_(std::move(wins)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (n < 2) {
    throw InvalidArgumentError("comparison data needs at least two objects");
  }
  if (wins_.rows() != n || wins_.cols() != n) {
    throw DimensionMismatchError("win matrix does not match label count");
  }
  std::unordered_map<std::string_view, int> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      throw InvalidArgumentError("object labels must be nonempty");
    }
    if (!seen.emplace(labels_[i], static_cast<int>(i)).second) {
      throw InvalidArgumentError("duplicate object label: " + labels_[i]);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (wins_(i, i) != 0) {
      throw SelfComparisonError("diagonal of the win matrix must be zero");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (wins_(i, j) < 0) {
        throw InvalidArgumentError("win counts must be nonnegative");
      }
      if (i < j) {
        std::int64_t pair = 0;
        if (__builtin_add_overflow(wins_(i, j), wins_(j, i), &pair) ||
            __builtin_add_overflow(total_, pair, &total_)) {
          throw CountOverflowError("total comparison count overflows int64");
        }
      }
    }
  }
  if (total_ < 1) {
    throw InvalidArgumentError("comparison data holds no comparisons");
  }
}

std::optional<int> ComparisonData::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::int64_t ComparisonData::comparisons_for(int i) const {
  if (i < 0 || i >= n()) {
    throw InvalidArgumentError("object index out of range");
  }
  std::int64_t count = 0;
  for (Eigen::Index j = 0; j < wins_.cols(); ++j) {
    count += wins_(i, j) + wins_(j, i);
  }
  return count;
}

ComparisonData build_comparison_data(
    const std::vector<ComparisonRecord>& records) {
  if (records.empty()) {
    throw EmptyInputError("no comparison records supplied");
  }
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  auto intern = [&](const std::string& label) {
    if (label.empty()) {
      throw InvalidArgumentError("object labels must be nonempty");
    }
    auto [it, inserted] = index.emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  struct Cell {
    int winner;
    int loser;
  };
  std::vector<Cell> cells;
  std::vector<std::int64_t> counts;
  for (const ComparisonRecord& rec : records) {
    if (rec.winner == rec.loser) {
      throw SelfComparisonError("object compared with itself: " + rec.winner);
    }
    if (rec.count <= 0) {
      throw InvalidArgumentError("record counts must be positive");
    }
    cells.push_back({intern(rec.winner), intern(rec.loser)});
    counts.push_back(rec.count);
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  CountMatrix wins = CountMatrix::Zero(n, n);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    std::int64_t& cell = wins(cells[k].winner, cells[k].loser);
    if (__builtin_add_overflow(cell, counts[k], &cell)) {
      throw CountOverflowError("win count overflows int64 for pair " +
                               labels[cells[k].winner] + " vs " +
                               labels[cells[k].loser]);
    }
  }
  return ComparisonData(std::move(labels), std::move(wins));
}

}  // namespace btrank
