#include "btrank/likelihood.hpp"

#include <cmath>

namespace btrank {

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log_sigmoid(double t) {
  if (t >= 0.0) {
    return -std::log1p(std::exp(-t));
  }
  return t - std::log1p(std::exp(t));
}

namespace {

void check_dimensions(const ScoreVector& beta, const ComparisonData& data) {
  if (beta.size() != data.n()) {
    throw DimensionMismatchError(
        "score vector has " + std::to_string(beta.size()) +
        " entries, data has " + std::to_string(data.n()) + " objects");
  }
}

// sigmoid(t) * sigmoid(-t), evaluated from the small tail.
double sigmoid_product(double t) {
  const double s = sigmoid(-std::abs(t));
  return s * (1.0 - s);
}

}  // namespace

double log_likelihood(const ScoreVector& beta, const ComparisonData& data) {
  check_dimensions(beta, data);
  const CountMatrix& wins = data.wins();
  const int n = data.n();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = beta[i] - beta[j];
      if (wins(i, j) > 0) total += wins(i, j) * log_sigmoid(d);
      if (wins(j, i) > 0) total += wins(j, i) * log_sigmoid(-d);
    }
  }
  return total;
}

Eigen::VectorXd gradient(const ScoreVector& beta, const ComparisonData& data) {
  check_dimensions(beta, data);
  const CountMatrix& wins = data.wins();
  const int n = data.n();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (wins(i, j) == 0 && wins(j, i) == 0) continue;
      const double d = beta[i] - beta[j];
      const double flow = wins(i, j) * sigmoid(-d) - wins(j, i) * sigmoid(d);
      grad[i] += flow;
      grad[j] -= flow;
    }
  }
  return grad;
}

Eigen::MatrixXd hessian(const ScoreVector& beta, const ComparisonData& data) {
  check_dimensions(beta, data);
  const CountMatrix& wins = data.wins();
  const int n = data.n();
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::int64_t pair_count = wins(i, j) + wins(j, i);
      if (pair_count == 0) continue;
      const double weight = pair_count * sigmoid_product(beta[i] - beta[j]);
      hess(i, i) -= weight;
      hess(j, j) -= weight;
      hess(i, j) += weight;
      hess(j, i) += weight;
    }
  }
  return hess;
}

}  // namespace btrank
