#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "btrank/comparison_data.hpp"
#include "btrank/inference.hpp"
#include "btrank/rng.hpp"
#include "btrank/solver.hpp"

namespace btrank {

// Distribution of the number of comparisons one subject makes (always >= 1,
// finite mean and variance).
class SubjectComparisons {
 public:
  enum class Kind { kFixed, kPoisson, kUniform };

  static SubjectComparisons fixed(long count);
  // Poisson(lambda) conditioned on >= 1.
  static SubjectComparisons poisson(double lambda);
  // Uniform integer on [lo, hi], lo >= 1.
  static SubjectComparisons uniform(long lo, long hi);

  long draw(Rng& rng) const;
  double mean() const;
  Kind kind() const { return kind_; }

 private:
  SubjectComparisons(Kind kind, double a, double b)
      : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

// Data-generation design: S subjects each draw their comparison count, then
// pick unordered pairs i.i.d. from the pair-frequency matrix P and report a
// winner according to the true scores.
struct DesignSpec {
  ScoreVector beta_star;            // true scores, 1^T beta* = 0
  Eigen::MatrixXd pair_frequency;   // P: symmetric, zero diagonal,
                                    // upper-triangle total 1
  long subjects = 1;
  SubjectComparisons comparisons = SubjectComparisons::fixed(1);
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(beta_star.size()); }
  void validate() const;  // throws InvalidSpecError
};

// P with equal weight on every unordered pair.
Eigen::MatrixXd uniform_pair_frequency(int n);
// n evenly spaced values over [lo, hi], shifted to sum to zero.
ScoreVector centered_linspace(int n, double lo, double hi);

ComparisonData generate_dataset(const DesignSpec& spec, Rng& rng);
// Stream derived from (spec.seed, replication): bit-identical for identical
// inputs, independent across replications.
ComparisonData generate_dataset(const DesignSpec& spec,
                                std::uint64_t replication = 0);

// Expected negative Hessian per unit comparison at the true scores:
//   sum_{i<j} P(i,j) sigmoid(d) sigmoid(-d) (e_i - e_j)(e_i - e_j)^T.
Eigen::MatrixXd fisher_information(const DesignSpec& spec);

struct ConsistencySample {
  long subjects = 0;
  int replication = 0;
  bool excluded = false;  // comparison graph not strongly connected
  double sup_error = 0.0; // ||beta_hat - beta_star||_inf
};

struct ConsistencyRow {
  long subjects = 0;
  int used = 0;
  int excluded = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  double q90_error = 0.0;
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;        // one per ladder entry
  std::vector<ConsistencySample> samples;  // keyed by (subjects, replication)
  // Strictly decreasing mean error along the ladder.
  bool errors_strictly_decreasing() const;
};

// Fits `replications` datasets per ladder entry under the sum constraint and
// tabulates sup-norm errors against beta_star. Replications whose data
// violate strong connectivity are counted and excluded.
ConsistencyResult consistency_experiment(const DesignSpec& base,
                                         const std::vector<long>& subject_ladder,
                                         int replications);

struct ReplicationRecord {
  Eigen::VectorXd beta_hat;
  Eigen::MatrixXd pair_freq;  // V / V_total
  std::vector<char> covered;  // per object
  std::int64_t total_comparisons = 0;
};

struct CoverageResult {
  Eigen::VectorXd per_object;  // coverage rate per object
  double aggregate = 0.0;
  int used = 0;
  int excluded = 0;
  double multiplier = 2.0;
  std::vector<ReplicationRecord> replications;
};

// Per replication: generate, fit under the sum constraint, form
// multiplier-SE intervals from the plug-in covariance, and record whether
// each true score is covered.
CoverageResult coverage_experiment(const DesignSpec& spec, int replications,
                                   double multiplier = 2.0);

// Synthetic analog of a lopsided survey: 21 objects, ~750 comparisons, one
// object taking part in only ~8 of them. Fitted under the sum constraint and
// with the rare object as reference; under the sum constraint the rare
// object soaks up the uncertainty, under the reference constraint the same
// uncertainty spreads to everyone else.
struct DemoReport {
  std::vector<std::string> labels;
  int rare_index = 0;
  std::int64_t rare_comparisons = 0;
  std::int64_t total_comparisons = 0;
  FitResult fit_sum;
  VarianceEstimate var_sum;
  FitResult fit_reference;
  VarianceEstimate var_reference;
  std::vector<ConfidenceInterval> ci_sum;        // multiplier 2
  std::vector<ConfidenceInterval> ci_reference;  // multiplier 2
  double trace_sum = 0.0;
  double trace_reference = 0.0;
  bool rare_has_max_se = false;       // under the sum constraint
  double min_se_ratio = 0.0;          // min over i != rare of se_ref/se_sum
  int attempts = 0;                   // streams tried before acceptance
};

inline constexpr std::uint64_t kDemoDefaultSeed = 1;

DemoReport uncertainty_concentration_demo(
    std::uint64_t seed = kDemoDefaultSeed);

}  // namespace btrank
