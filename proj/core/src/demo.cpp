#include <algorithm>
#include <limits>

#include "btrank/connectivity.hpp"
#include "btrank/simulate.hpp"

namespace btrank {

namespace {

constexpr int kDemoObjects = 21;
constexpr double kDemoTargetComparisons = 750.0;
constexpr double kDemoRareComparisons = 8.0;
constexpr long kDemoSubjects = 52;

// Uniform pair weights except that every pair touching the rare object gets
// a sliver, tuned so the rare object's expected participation is ~8 of ~750.
Eigen::MatrixXd lopsided_pair_frequency(int n, int rare) {
  const double rare_weight =
      kDemoRareComparisons / kDemoTargetComparisons / (n - 1);
  const double common_pairs = static_cast<double>(n - 1) * (n - 2) / 2.0;
  const double common_weight =
      (1.0 - rare_weight * (n - 1)) / common_pairs;
  Eigen::MatrixXd pair_frequency =
      Eigen::MatrixXd::Constant(n, n, common_weight);
  pair_frequency.diagonal().setZero();
  for (int j = 0; j < n; ++j) {
    if (j == rare) continue;
    pair_frequency(rare, j) = rare_weight;
    pair_frequency(j, rare) = rare_weight;
  }
  return pair_frequency;
}

}  // namespace

DemoReport uncertainty_concentration_demo(std::uint64_t seed) {
  const int n = kDemoObjects;
  const int rare = 0;

  DesignSpec spec;
  spec.beta_star = centered_linspace(n, -1.0, 1.0);
  spec.pair_frequency = lopsided_pair_frequency(n, rare);
  spec.subjects = kDemoSubjects;
  spec.comparisons =
      SubjectComparisons::poisson(kDemoTargetComparisons / kDemoSubjects);
  spec.seed = seed;

  // Deterministic retry over replication streams: accept the first sample
  // that is strongly connected with the rare object both scarce and uniquely
  // the least-compared.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const ComparisonData data =
        generate_dataset(spec, static_cast<std::uint64_t>(attempt));
    const std::int64_t rare_count = data.comparisons_for(rare);
    if (rare_count < 4 || rare_count > 16) continue;
    bool rare_is_min = true;
    for (int i = 0; i < n; ++i) {
      if (i != rare && data.comparisons_for(i) <= rare_count) {
        rare_is_min = false;
        break;
      }
    }
    if (!rare_is_min) continue;
    if (!check_connectivity(data).strongly_connected) continue;

    FitResult fit_sum = fit_sum_constraint(data);
    VarianceEstimate var_sum = variance_sum_constraint(fit_sum, data);
    const Constraint reference = Constraint::reference(rare, n);
    FitResult fit_reference = fit_with_constraint(data, reference);
    VarianceEstimate var_reference =
        variance_general_constraint(var_sum, reference);

    int max_se_index = 0;
    var_sum.se.maxCoeff(&max_se_index);

    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (i == rare || var_sum.se[i] <= 0.0) continue;
      min_ratio = std::min(min_ratio, var_reference.se[i] / var_sum.se[i]);
    }

    return DemoReport{
        .labels = data.labels(),
        .rare_index = rare,
        .rare_comparisons = rare_count,
        .total_comparisons = data.total_comparisons(),
        .fit_sum = fit_sum,
        .var_sum = var_sum,
        .fit_reference = fit_reference,
        .var_reference = var_reference,
        .ci_sum = confidence_intervals(fit_sum, var_sum, 2.0),
        .ci_reference =
            confidence_intervals(fit_reference, var_reference, 2.0),
        .trace_sum = var_sum.cov.trace(),
        .trace_reference = var_reference.cov.trace(),
        .rare_has_max_se = max_se_index == rare,
        .min_se_ratio = min_ratio,
        .attempts = attempt + 1,
    };
  }
  throw InvalidSpecError(
      "no acceptable demo dataset found within 1000 streams");
}

}  // namespace btrank
