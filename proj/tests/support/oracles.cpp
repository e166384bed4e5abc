#include "oracles.hpp"

#include <cmath>
#include <deque>

#include <Eigen/Dense>

namespace btrank::testing {

Eigen::VectorXd fd_gradient(const ScoreVector& beta,
                            const ComparisonData& data, double step) {
  Eigen::VectorXd grad(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    ScoreVector up = beta;
    ScoreVector down = beta;
    up[i] += step;
    down[i] -= step;
    grad[i] =
        (log_likelihood(up, data) - log_likelihood(down, data)) / (2.0 * step);
  }
  return grad;
}

Eigen::MatrixXd fd_hessian(const ScoreVector& beta, const ComparisonData& data,
                           double step) {
  Eigen::MatrixXd hess(beta.size(), beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    ScoreVector up = beta;
    ScoreVector down = beta;
    up[i] += step;
    down[i] -= step;
    hess.col(i) = (gradient(up, data) - gradient(down, data)) / (2.0 * step);
  }
  return hess;
}

Eigen::MatrixXd eigen_pseudoinverse(const Eigen::MatrixXd& m,
                                    double rel_threshold) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  const Eigen::VectorXd values = solver.eigenvalues();
  const double cutoff = rel_threshold * values.cwiseAbs().maxCoeff();
  Eigen::VectorXd inverted = Eigen::VectorXd::Zero(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) > cutoff) inverted[i] = 1.0 / values[i];
  }
  return solver.eigenvectors() * inverted.asDiagonal() *
         solver.eigenvectors().transpose();
}

bool is_strongly_connected_bfs(const CountMatrix& wins) {
  const int n = static_cast<int>(wins.rows());
  for (int start = 0; start < n; ++start) {
    std::vector<char> seen(n, 0);
    std::deque<int> frontier{start};
    seen[start] = 1;
    int reached = 1;
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop_front();
      for (int w = 0; w < n; ++w) {
        if (!seen[w] && v != w && wins(v, w) > 0) {
          seen[w] = 1;
          ++reached;
          frontier.push_back(w);
        }
      }
    }
    if (reached != n) return false;
  }
  return true;
}

bool partition_violates(const CountMatrix& wins, unsigned mask) {
  const int n = static_cast<int>(wins.rows());
  for (int outside = 0; outside < n; ++outside) {
    if (mask & (1u << outside)) continue;
    for (int inside = 0; inside < n; ++inside) {
      if (!(mask & (1u << inside))) continue;
      if (wins(outside, inside) > 0) return false;
    }
  }
  return true;
}

std::optional<unsigned> find_violating_bipartition(const CountMatrix& wins) {
  const int n = static_cast<int>(wins.rows());
  const unsigned full = (1u << n) - 1;
  for (unsigned mask = 1; mask < full; ++mask) {
    if (partition_violates(wins, mask)) return mask;
  }
  return std::nullopt;
}

Eigen::Vector3d grid_fit_3(const CountMatrix& wins) {
  auto loglik = [&wins](double b1, double b2) {
    const double scores[3] = {b1, b2, -b1 - b2};
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j || wins(i, j) == 0) continue;
        total -= static_cast<double>(wins(i, j)) *
                 std::log1p(std::exp(-(scores[i] - scores[j])));
      }
    }
    return total;
  };

  double best1 = 0.0;
  double best2 = 0.0;
  double best = loglik(best1, best2);
  auto scan = [&](double center1, double center2, double half, double step) {
    for (double x = center1 - half; x <= center1 + half + 1e-12; x += step) {
      for (double y = center2 - half; y <= center2 + half + 1e-12; y += step) {
        const double value = loglik(x, y);
        if (value > best) {
          best = value;
          best1 = x;
          best2 = y;
        }
      }
    }
  };
  scan(0.0, 0.0, 8.0, 0.1);
  scan(best1, best2, 0.15, 0.005);
  scan(best1, best2, 0.0075, 0.00025);
  return {best1, best2, -best1 - best2};
}

CountMatrix random_win_matrix(Rng& rng, int n, std::int64_t max_count,
                              double zero_prob) {
  CountMatrix wins = CountMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || rng.bernoulli(zero_prob)) continue;
      wins(i, j) = rng.next_int(1, max_count);
    }
  }
  if (wins.sum() == 0) {
    const int i = static_cast<int>(rng.next_int(0, n - 1));
    int j = static_cast<int>(rng.next_int(0, n - 2));
    if (j >= i) ++j;
    wins(i, j) = rng.next_int(1, max_count);
  }
  return wins;
}

ComparisonData random_connected_data(Rng& rng, int n, std::int64_t max_count,
                                     double zero_prob) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    CountMatrix wins = random_win_matrix(rng, n, max_count, zero_prob);
    if (wins.sum() == 0 || !is_strongly_connected_bfs(wins)) continue;
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = "o" + std::to_string(i + 1);
    return ComparisonData(std::move(labels), std::move(wins));
  }
  throw std::logic_error("random_connected_data: rejection sampling stalled");
}

ScoreVector random_scores(Rng& rng, int n, double radius) {
  ScoreVector scores(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = radius * (2.0 * rng.next_unit() - 1.0);
  }
  return scores;
}

ComparisonData data_from_wins(
    const std::vector<std::vector<std::int64_t>>& rows) {
  const int n = static_cast<int>(rows.size());
  CountMatrix wins(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) wins(i, j) = rows[i][j];
  }
  return data_from_matrix(std::move(wins));
}

ComparisonData data_from_matrix(CountMatrix wins) {
  const int n = static_cast<int>(wins.rows());
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = "o" + std::to_string(i + 1);
  return ComparisonData(std::move(labels), std::move(wins));
}

}  // namespace btrank::testing
