#include "btrank/connectivity.hpp"

#include <algorithm>

namespace btrank {

// Iterative Tarjan. Components pop in reverse topological order of the
// condensation, so reversing the list puts sources first.
std::vector<std::vector<int>> strongly_connected_components(
    const CountMatrix& wins) {
  const int n = static_cast<int>(wins.rows());
  std::vector<std::vector<int>> adjacent(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && wins(i, j) > 0) adjacent[i].push_back(j);
    }
  }

  std::vector<int> order(n, -1);
  std::vector<int> lowlink(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  stack.reserve(n);
  int next_order = 0;

  struct Frame {
    int vertex;
    std::size_t edge;
  };
  std::vector<Frame> calls;
  std::vector<std::vector<int>> components;

  for (int root = 0; root < n; ++root) {
    if (order[root] != -1) continue;
    order[root] = lowlink[root] = next_order++;
    stack.push_back(root);
    on_stack[root] = 1;
    calls.push_back({root, 0});
    while (!calls.empty()) {
      const int v = calls.back().vertex;
      if (calls.back().edge < adjacent[v].size()) {
        const int w = adjacent[v][calls.back().edge++];
        if (order[w] == -1) {
          order[w] = lowlink[w] = next_order++;
          stack.push_back(w);
          on_stack[w] = 1;
          calls.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], order[w]);
        }
      } else {
        calls.pop_back();
        if (!calls.empty()) {
          lowlink[calls.back().vertex] =
              std::min(lowlink[calls.back().vertex], lowlink[v]);
        }
        if (lowlink[v] == order[v]) {
          std::vector<int> component;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            component.push_back(w);
          } while (w != v);
          std::sort(component.begin(), component.end());
          components.push_back(std::move(component));
        }
      }
    }
  }
  std::reverse(components.begin(), components.end());
  return components;
}

ConnectivityReport check_connectivity(const ComparisonData& data) {
  ConnectivityReport report;
  report.components = strongly_connected_components(data.wins());
  report.strongly_connected = report.components.size() == 1;
  if (!report.strongly_connected) {
    // The first component is a source of the condensation: nothing outside
    // it ever beat one of its members.
    WitnessPartition witness;
    witness.group = report.components.front();
    for (std::size_t k = 1; k < report.components.size(); ++k) {
      witness.complement.insert(witness.complement.end(),
                                report.components[k].begin(),
                                report.components[k].end());
    }
    std::sort(witness.complement.begin(), witness.complement.end());
    report.witness = std::move(witness);
  }
  return report;
}

namespace {

std::string witness_message(const ConnectivityReport& report) {
  std::string message =
      "comparison graph is not strongly connected (" +
      std::to_string(report.components.size()) + " components)";
  if (report.witness) {
    message += "; no object outside {";
    for (std::size_t i = 0; i < report.witness->group.size(); ++i) {
      if (i) message += ", ";
      message += std::to_string(report.witness->group[i]);
    }
    message += "} has beaten a member of it";
  }
  return message;
}

}  // namespace

NotConnectedError::NotConnectedError(ConnectivityReport report)
    : Error(witness_message(report)), report_(std::move(report)) {}

}  // namespace btrank
