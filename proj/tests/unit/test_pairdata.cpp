#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "btrank/connectivity.hpp"
#include "btrank/csv_io.hpp"
#include "oracles.hpp"

using namespace btrank;
namespace bt = btrank::testing;

TEST_CASE("build_comparison_data accumulates wins in label order") {
  const auto data = build_comparison_data({{"A", "B", 3}, {"B", "A", 1}});
  CHECK(data.n() == 2);
  CHECK(data.labels() == std::vector<std::string>{"A", "B"});
  CHECK(data.wins()(0, 1) == 3);
  CHECK(data.wins()(1, 0) == 1);
  CHECK(data.wins()(0, 0) == 0);
  CHECK(data.total_comparisons() == 4);

  const auto repeated = build_comparison_data({{"A", "B", 2}, {"A", "B", 1}});
  CHECK(repeated.wins()(0, 1) == 3);
}

TEST_CASE("build_comparison_data rejects bad records") {
  CHECK_THROWS_AS(build_comparison_data({{"A", "A", 1}}), SelfComparisonError);
  CHECK_THROWS_AS(build_comparison_data({}), EmptyInputError);
  CHECK_THROWS_AS(build_comparison_data({{"A", "B", 0}}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(build_comparison_data({{"A", "B", -2}}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(build_comparison_data({{"", "B", 1}}), InvalidArgumentError);

  const auto huge = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(build_comparison_data({{"A", "B", huge}, {"A", "B", 1}}),
                  CountOverflowError);
}

TEST_CASE("per-object comparison counts double-count the total") {
  Rng rng(7);
  const auto data = bt::random_connected_data(rng, 6);
  std::int64_t doubled = 0;
  for (int i = 0; i < data.n(); ++i) doubled += data.comparisons_for(i);
  CHECK(doubled == 2 * data.total_comparisons());
}

TEST_CASE("check_connectivity on small graphs") {
  const auto mutual = bt::data_from_wins({{0, 1}, {1, 0}});
  CHECK(check_connectivity(mutual).strongly_connected);

  const auto one_way = bt::data_from_wins({{0, 1}, {0, 0}});
  const auto report = check_connectivity(one_way);
  CHECK_FALSE(report.strongly_connected);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->group == std::vector<int>{0});
  CHECK(report.witness->complement == std::vector<int>{1});
  // The witness is a genuine violation: nobody outside the group beat it.
  unsigned mask = 0;
  for (int v : report.witness->group) mask |= 1u << v;
  CHECK(bt::partition_violates(one_way.wins(), mask));

  const auto cycle =
      bt::data_from_wins({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  CHECK(check_connectivity(cycle).strongly_connected);
  CHECK(bt::is_strongly_connected_bfs(cycle.wins()));
  CHECK_FALSE(bt::find_violating_bipartition(cycle.wins()).has_value());
}

TEST_CASE("connectivity verdict matches brute-force bipartition enumeration") {
  Rng rng(11);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = static_cast<int>(rng.next_int(2, 7));
    const double zero_prob = 0.3 + 0.6 * rng.next_unit();
    CountMatrix wins = bt::random_win_matrix(rng, n, 4, zero_prob);
    if (wins.sum() == 0) wins(0, 1) = 1;
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = "x" + std::to_string(i);
    const ComparisonData data(labels, wins);

    const auto report = check_connectivity(data);
    const auto violation = bt::find_violating_bipartition(wins);
    CHECK(report.strongly_connected == !violation.has_value());
    CHECK(report.strongly_connected == bt::is_strongly_connected_bfs(wins));
    CHECK(report.strongly_connected == (report.components.size() == 1));
    CHECK(report.witness.has_value() == !report.strongly_connected);
    if (report.witness) {
      unsigned mask = 0;
      for (int v : report.witness->group) mask |= 1u << v;
      CHECK(mask != 0);
      CHECK(mask != (1u << n) - 1);
      CHECK(bt::partition_violates(wins, mask));
    }
  }
}

namespace {

std::vector<std::vector<int>> canonical_components(
    std::vector<std::vector<int>> components) {
  for (auto& component : components) {
    std::sort(component.begin(), component.end());
  }
  std::sort(components.begin(), components.end());
  return components;
}

}  // namespace

TEST_CASE("connectivity is invariant under relabeling permutations") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    CountMatrix wins = bt::random_win_matrix(rng, n, 5, 0.55);
    if (wins.sum() == 0) wins(2, 4) = 1;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.next_int(0, i)]);
    }
    CountMatrix permuted(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) permuted(perm[i], perm[j]) = wins(i, j);
    }

    const auto base = check_connectivity(bt::data_from_matrix(wins));
    const auto relabeled = check_connectivity(bt::data_from_matrix(permuted));

    CHECK(base.strongly_connected == relabeled.strongly_connected);
    auto mapped = base.components;
    for (auto& component : mapped) {
      for (int& v : component) v = perm[v];
    }
    CHECK(canonical_components(mapped) ==
          canonical_components(relabeled.components));
  }
}

TEST_CASE("load_csv parses the long format") {
  std::istringstream in("winner,loser,count\nA,B,3\nB,A,1\n");
  const auto data = load_csv(in, "inline");
  CHECK(data.labels() == std::vector<std::string>{"A", "B"});
  CHECK(data.wins()(0, 1) == 3);
  CHECK(data.wins()(1, 0) == 1);
}

TEST_CASE("load_csv failure modes") {
  {
    std::istringstream in("win,lose,n\nA,B,3\n");
    CHECK_THROWS_AS(load_csv(in, "inline"), ParseError);
  }
  {
    std::istringstream in("winner,loser,count\nA,B,x\n");
    try {
      load_csv(in, "inline");
      FAIL("expected ParseError");
    } catch (const ParseError& error) {
      CHECK(error.line() == 2);
    }
  }
  {
    std::istringstream in("winner,loser,count\nA,B,3\nC,C,1\n");
    try {
      load_csv(in, "inline");
      FAIL("expected ParseError");
    } catch (const ParseError& error) {
      CHECK(error.line() == 3);
    }
  }
  {
    std::istringstream in("winner,loser,count\nA,B,-1\n");
    CHECK_THROWS_AS(load_csv(in, "inline"), ParseError);
  }
  CHECK_THROWS_AS(load_csv("/nonexistent/btrank.csv"), IoError);
}

TEST_CASE("csv round trip preserves wins and label order") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = static_cast<int>(rng.next_int(2, 8));
    CountMatrix wins = bt::random_win_matrix(rng, n, 9, 0.5);
    if (wins.sum() == 0) wins(n - 1, 0) = 2;
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
      labels[i] = "obj " + std::to_string(static_cast<int>(rng.next_int(100, 999))) +
                  "_" + std::to_string(i);
    }
    const ComparisonData data(labels, wins);

    std::stringstream buffer;
    save_csv(data, buffer);
    const auto reloaded = load_csv(buffer, "roundtrip");
    CHECK(reloaded.labels() == data.labels());
    CHECK((reloaded.wins() == data.wins()));
  }
}

TEST_CASE("json export carries labels and the win matrix") {
  const auto data = build_comparison_data({{"A", "B", 3}, {"B", "A", 1}});
  const auto doc = nlohmann::json::parse(to_json(data));
  CHECK(doc["labels"] == nlohmann::json({"A", "B"}));
  CHECK(doc["W"][0][1] == 3);
  CHECK(doc["W"][1][0] == 1);
  CHECK(doc["W"][0][0] == 0);
}
