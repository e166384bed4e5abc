#pragma once

#include <optional>

#include <Eigen/Core>

#include "btrank/comparison_data.hpp"
#include "btrank/connectivity.hpp"
#include "btrank/likelihood.hpp"

namespace btrank {

// Identifying constraint alpha^T beta = 0. Identifiable whenever
// 1^T alpha != 0; alpha = 1 is the sum constraint, alpha = e_i the
// reference constraint with object i pinned to score 0.
class Constraint {
 public:
  explicit Constraint(Eigen::VectorXd alpha);
  static Constraint sum(int n);
  static Constraint reference(int index, int n);

  const Eigen::VectorXd& alpha() const { return alpha_; }
  int size() const { return static_cast<int>(alpha_.size()); }
  // |1^T alpha| > 1e-12 * ||alpha||_1
  bool identifiable() const;
  // alpha proportional to the ones vector (entrywise equal, nonzero).
  bool is_sum() const;

 private:
  Eigen::VectorXd alpha_;
};

struct FitOptions {
  // Convergence: projected-gradient sup-norm at the iterate.
  double tol = 1e-10;
  int max_iterations = 200;
  // Starting point; centered onto the sum hyperplane. Default: zeros.
  std::optional<Eigen::VectorXd> initial_beta;
};

struct FitResult {
  ScoreVector beta_hat;
  Constraint constraint;
  double loglik = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Maximizes the log-likelihood over {beta : 1^T beta = 0} by Newton's method
// on the first n-1 coordinates (the last is recovered from the constraint)
// with step-halving line search. Throws NotConnectedError when the
// comparison graph is not strongly connected and MaxIterationsError when the
// iteration cap is hit.
FitResult fit_sum_constraint(const ComparisonData& data,
                             const FitOptions& opts = {});

// Fits under the sum constraint, then translates the optimum onto the
// hyperplane alpha^T beta = 0. The log-likelihood and all pairwise score
// differences are unchanged by the translation.
FitResult fit_with_constraint(const ComparisonData& data,
                              const Constraint& constraint,
                              const FitOptions& opts = {});

// beta - (alpha^T beta / 1^T alpha) * 1: the unique translate of beta lying
// on the constraint hyperplane.
ScoreVector shift_to_constraint(const ScoreVector& beta,
                                const Constraint& constraint);

// log w recentred so that alpha^T result = 0. Requires w > 0 entrywise.
ScoreVector beta_from_w(const Eigen::VectorXd& w, const Constraint& constraint);

// Softmax of beta: positive, sums to one, inverse of beta_from_w up to the
// sum-to-one normalization. Stable via max subtraction.
Eigen::VectorXd w_from_beta(const ScoreVector& beta);

}  // namespace btrank
