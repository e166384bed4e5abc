#include "btrank/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "btrank/connectivity.hpp"
#include "btrank/likelihood.hpp"

namespace btrank {

SubjectComparisons SubjectComparisons::fixed(long count) {
  if (count < 1) {
    throw InvalidSpecError("fixed comparison count must be >= 1");
  }
  return SubjectComparisons(Kind::kFixed, static_cast<double>(count), 0.0);
}

SubjectComparisons SubjectComparisons::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidSpecError("poisson rate must be positive and finite");
  }
  return SubjectComparisons(Kind::kPoisson, lambda, 0.0);
}

SubjectComparisons SubjectComparisons::uniform(long lo, long hi) {
  if (lo < 1 || hi < lo) {
    throw InvalidSpecError("uniform comparison range needs 1 <= lo <= hi");
  }
  return SubjectComparisons(Kind::kUniform, static_cast<double>(lo),
                            static_cast<double>(hi));
}

long SubjectComparisons::draw(Rng& rng) const {
  switch (kind_) {
    case Kind::kFixed:
      return static_cast<long>(a_);
    case Kind::kPoisson: {
      long value;
      do {
        value = rng.poisson(a_);
      } while (value < 1);
      return value;
    }
    case Kind::kUniform:
      return rng.next_int(static_cast<long>(a_), static_cast<long>(b_));
  }
  throw InvalidSpecError("unknown comparison distribution");
}

double SubjectComparisons::mean() const {
  switch (kind_) {
    case Kind::kFixed:
      return a_;
    case Kind::kPoisson:
      return a_ / (1.0 - std::exp(-a_));  // conditioned on >= 1
    case Kind::kUniform:
      return 0.5 * (a_ + b_);
  }
  throw InvalidSpecError("unknown comparison distribution");
}

void DesignSpec::validate() const {
  const auto size = beta_star.size();
  if (size < 2) {
    throw InvalidSpecError("design needs at least two objects");
  }
  if (!beta_star.allFinite()) {
    throw InvalidSpecError("true scores must be finite");
  }
  if (std::abs(beta_star.sum()) > 1e-8 * (1.0 + beta_star.lpNorm<1>())) {
    throw InvalidSpecError("true scores must sum to zero");
  }
  if (pair_frequency.rows() != size || pair_frequency.cols() != size) {
    throw InvalidSpecError("pair-frequency matrix dimension mismatch");
  }
  if (!pair_frequency.allFinite() || (pair_frequency.array() < 0.0).any()) {
    throw InvalidSpecError("pair frequencies must be finite and nonnegative");
  }
  if ((pair_frequency - pair_frequency.transpose()).cwiseAbs().maxCoeff() >
      1e-12) {
    throw InvalidSpecError("pair-frequency matrix must be symmetric");
  }
  if (pair_frequency.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw InvalidSpecError("pair-frequency diagonal must be zero");
  }
  double upper_total = 0.0;
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = i + 1; j < size; ++j) {
      upper_total += pair_frequency(i, j);
    }
  }
  if (std::abs(upper_total - 1.0) > 1e-12) {
    throw InvalidSpecError(
        "pair frequencies must total 1 over unordered pairs");
  }
  if (subjects < 1) {
    throw InvalidSpecError("subject count must be >= 1");
  }
}

Eigen::MatrixXd uniform_pair_frequency(int n) {
  if (n < 2) {
    throw InvalidSpecError("uniform pair design needs n >= 2");
  }
  const double weight = 2.0 / (static_cast<double>(n) * (n - 1));
  Eigen::MatrixXd pair_frequency = Eigen::MatrixXd::Constant(n, n, weight);
  pair_frequency.diagonal().setZero();
  return pair_frequency;
}

ScoreVector centered_linspace(int n, double lo, double hi) {
  if (n < 2) {
    throw InvalidSpecError("centered linspace needs n >= 2");
  }
  ScoreVector scores = Eigen::VectorXd::LinSpaced(n, lo, hi);
  scores.array() -= scores.mean();
  return scores;
}

namespace {

std::vector<std::string> generated_labels(int n) {
  int width = 1;
  for (int power = 10; power <= n; power *= 10) ++width;
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    std::string digits = std::to_string(i + 1);
    labels[i] = "item" + std::string(width - digits.size(), '0') + digits;
  }
  return labels;
}

struct PairTable {
  std::vector<double> cumulative;
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;

  explicit PairTable(const Eigen::MatrixXd& pair_frequency) {
    const int n = static_cast<int>(pair_frequency.rows());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (pair_frequency(i, j) > 0.0) {
          total += pair_frequency(i, j);
          cumulative.push_back(total);
          pairs.emplace_back(i, j);
        }
      }
    }
    if (pairs.empty()) {
      throw InvalidSpecError("pair-frequency matrix has no positive entry");
    }
  }

  std::pair<int, int> draw(Rng& rng) const {
    const double u = rng.next_unit() * total;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), pairs.size() - 1);
    return pairs[idx];
  }
};

}  // namespace

ComparisonData generate_dataset(const DesignSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.n();
  const PairTable table(spec.pair_frequency);
  CountMatrix wins = CountMatrix::Zero(n, n);
  for (long subject = 0; subject < spec.subjects; ++subject) {
    const long comparisons = spec.comparisons.draw(rng);
    for (long c = 0; c < comparisons; ++c) {
      const auto [i, j] = table.draw(rng);
      const double p_first = sigmoid(spec.beta_star[i] - spec.beta_star[j]);
      if (rng.bernoulli(p_first)) {
        ++wins(i, j);
      } else {
        ++wins(j, i);
      }
    }
  }
  return ComparisonData(generated_labels(n), std::move(wins));
}

ComparisonData generate_dataset(const DesignSpec& spec,
                                std::uint64_t replication) {
  Rng rng = replication_stream(spec.seed, replication);
  return generate_dataset(spec, rng);
}

Eigen::MatrixXd fisher_information(const DesignSpec& spec) {
  spec.validate();
  const int n = spec.n();
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (spec.pair_frequency(i, j) == 0.0) continue;
      const double d = spec.beta_star[i] - spec.beta_star[j];
      const double weight =
          spec.pair_frequency(i, j) * sigmoid(d) * sigmoid(-d);
      info(i, i) += weight;
      info(j, j) += weight;
      info(i, j) -= weight;
      info(j, i) -= weight;
    }
  }
  return info;
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(position);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

bool ConsistencyResult::errors_strictly_decreasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].mean_error < rows[k - 1].mean_error)) return false;
  }
  return !rows.empty();
}

ConsistencyResult consistency_experiment(
    const DesignSpec& base, const std::vector<long>& subject_ladder,
    int replications) {
  base.validate();
  if (subject_ladder.empty()) {
    throw InvalidSpecError("subject ladder is empty");
  }
  if (replications < 1) {
    throw InvalidSpecError("replication count must be >= 1");
  }

  ConsistencyResult result;
  for (std::size_t rung = 0; rung < subject_ladder.size(); ++rung) {
    DesignSpec spec = base;
    spec.subjects = subject_ladder[rung];
    if (spec.subjects < 1) {
      throw InvalidSpecError("subject counts must be >= 1");
    }

    std::vector<double> errors;
    errors.reserve(replications);
    int excluded = 0;
    for (int rep = 0; rep < replications; ++rep) {
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(rung) << 32) |
          static_cast<std::uint64_t>(rep);
      Rng rng = replication_stream(base.seed, stream);
      const ComparisonData data = generate_dataset(spec, rng);

      ConsistencySample sample;
      sample.subjects = spec.subjects;
      sample.replication = rep;
      if (!check_connectivity(data).strongly_connected) {
        sample.excluded = true;
        ++excluded;
      } else {
        const FitResult fit = fit_sum_constraint(data);
        sample.sup_error =
            (fit.beta_hat - spec.beta_star).lpNorm<Eigen::Infinity>();
        errors.push_back(sample.sup_error);
      }
      result.samples.push_back(sample);
    }

    std::sort(errors.begin(), errors.end());
    ConsistencyRow row;
    row.subjects = spec.subjects;
    row.used = static_cast<int>(errors.size());
    row.excluded = excluded;
    if (!errors.empty()) {
      double sum = 0.0;
      for (double e : errors) sum += e;
      row.mean_error = sum / static_cast<double>(errors.size());
      row.median_error = quantile_sorted(errors, 0.5);
      row.q90_error = quantile_sorted(errors, 0.9);
    }
    result.rows.push_back(row);
  }
  return result;
}

CoverageResult coverage_experiment(const DesignSpec& spec, int replications,
                                   double multiplier) {
  spec.validate();
  if (replications < 1) {
    throw InvalidSpecError("replication count must be >= 1");
  }
  if (!(multiplier >= 0.0)) {
    throw InvalidSpecError("CI multiplier must be nonnegative");
  }

  const int n = spec.n();
  CoverageResult result;
  result.multiplier = multiplier;
  Eigen::VectorXd covered_counts = Eigen::VectorXd::Zero(n);

  for (int rep = 0; rep < replications; ++rep) {
    const ComparisonData data =
        generate_dataset(spec, static_cast<std::uint64_t>(rep));
    if (!check_connectivity(data).strongly_connected) {
      ++result.excluded;
      continue;
    }
    const FitResult fit = fit_sum_constraint(data);
    const VarianceEstimate var = variance_sum_constraint(fit, data);
    const auto intervals = confidence_intervals(fit, var, multiplier);

    ReplicationRecord record;
    record.beta_hat = fit.beta_hat;
    record.total_comparisons = data.total_comparisons();
    record.pair_freq =
        data.comparisons().cast<double>() /
        static_cast<double>(data.total_comparisons());
    record.covered.resize(n);
    for (int i = 0; i < n; ++i) {
      const bool inside = spec.beta_star[i] >= intervals[i].low &&
                          spec.beta_star[i] <= intervals[i].high;
      record.covered[i] = inside ? 1 : 0;
      if (inside) covered_counts[i] += 1.0;
    }
    result.replications.push_back(std::move(record));
    ++result.used;
  }

  if (result.used > 0) {
    result.per_object = covered_counts / static_cast<double>(result.used);
    result.aggregate =
        covered_counts.sum() /
        (static_cast<double>(result.used) * static_cast<double>(n));
  } else {
    result.per_object = Eigen::VectorXd::Zero(n);
  }
  return result;
}

}  // namespace btrank
