#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "btrank/comparison_data.hpp"
#include "btrank/errors.hpp"

namespace btrank {

// Bipartition certifying that the MLE does not exist: no object in
// `complement` ever beat an object in `group`.
struct WitnessPartition {
  std::vector<int> group;
  std::vector<int> complement;
};

struct ConnectivityReport {
  bool strongly_connected = false;
  // Strongly connected components of the win digraph, in topological order
  // of the condensation (sources first); members sorted ascending.
  std::vector<std::vector<int>> components;
  // Present iff strongly_connected is false.
  std::optional<WitnessPartition> witness;
};

// Components of the digraph with an edge i -> j whenever wins(i, j) > 0.
std::vector<std::vector<int>> strongly_connected_components(
    const CountMatrix& wins);

ConnectivityReport check_connectivity(const ComparisonData& data);

// Thrown when a fit is requested for data whose comparison graph is not
// strongly connected, i.e. the constrained MLE does not exist or is not
// unique. Carries the witness bipartition.
class NotConnectedError : public Error {
 public:
  explicit NotConnectedError(ConnectivityReport report);
  const ConnectivityReport& report() const { return report_; }

 private:
  ConnectivityReport report_;
};

}  // namespace btrank
