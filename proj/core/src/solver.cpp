#include "btrank/solver.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <Eigen/Cholesky>

namespace btrank {

Constraint::Constraint(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 1) {
    throw InvalidArgumentError("constraint vector is empty");
  }
  if (!alpha_.allFinite()) {
    throw InvalidArgumentError("constraint vector has non-finite entries");
  }
  if (alpha_.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgumentError("constraint vector must be nonzero");
  }
}

Constraint Constraint::sum(int n) {
  return Constraint(Eigen::VectorXd::Ones(n));
}

Constraint Constraint::reference(int index, int n) {
  if (index < 0 || index >= n) {
    throw InvalidArgumentError("reference index out of range");
  }
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  alpha[index] = 1.0;
  return Constraint(std::move(alpha));
}

bool Constraint::identifiable() const {
  return std::abs(alpha_.sum()) > 1e-12 * alpha_.lpNorm<1>();
}

bool Constraint::is_sum() const {
  const double first = alpha_[0];
  if (first == 0.0) return false;
  return (alpha_.array() == first).all();
}

namespace {

// beta with 1^T beta = 0 from its first n-1 coordinates.
ScoreVector embed(const Eigen::VectorXd& reduced) {
  const auto n = reduced.size() + 1;
  ScoreVector beta(n);
  beta.head(n - 1) = reduced;
  beta[n - 1] = -reduced.sum();
  return beta;
}

void require_identifiable(const Constraint& constraint) {
  if (!constraint.identifiable()) {
    throw DegenerateConstraintError(
        "constraint is not identifying: 1^T alpha ~ 0, a constant can still "
        "be added to all scores");
  }
}

}  // namespace

FitResult fit_sum_constraint(const ComparisonData& data,
                             const FitOptions& opts) {
  if (opts.tol <= 0.0) {
    throw InvalidArgumentError("fit tolerance must be positive");
  }
  if (opts.max_iterations < 1) {
    throw InvalidArgumentError("max_iterations must be at least 1");
  }
  ConnectivityReport report = check_connectivity(data);
  if (!report.strongly_connected) {
    throw NotConnectedError(std::move(report));
  }

  const int n = data.n();
  const int m = n - 1;
  Eigen::VectorXd reduced = Eigen::VectorXd::Zero(m);
  if (opts.initial_beta) {
    if (opts.initial_beta->size() != n) {
      throw DimensionMismatchError("initial point has wrong dimension");
    }
    if (!opts.initial_beta->allFinite()) {
      throw InvalidArgumentError("initial point has non-finite entries");
    }
    Eigen::VectorXd start = *opts.initial_beta;
    start.array() -= start.mean();  // center onto the sum hyperplane
    reduced = start.head(m);
  }

  ScoreVector beta = embed(reduced);
  double loglik = log_likelihood(beta, data);
  int iterations = 0;

  // One Newton step from `beta`; returns false when the line search cannot
  // improve the log-likelihood (numerically stationary).
  auto newton_step = [&](const Eigen::VectorXd& grad) {
    const Eigen::MatrixXd hess = hessian(beta, data);
    // Reduced system J^T (-H) J with J = [I; -1^T]: negative definite H on
    // the hyperplane makes this positive definite under connectivity.
    Eigen::MatrixXd reduced_neg_hess(m, m);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        reduced_neg_hess(r, c) =
            -(hess(r, c) - hess(r, m) - hess(m, c) + hess(m, m));
      }
    }
    Eigen::VectorXd reduced_grad(m);
    for (int r = 0; r < m; ++r) reduced_grad[r] = grad[r] - grad[m];

    Eigen::LLT<Eigen::MatrixXd> llt(reduced_neg_hess);
    Eigen::VectorXd direction;
    if (llt.info() == Eigen::Success) {
      direction = llt.solve(reduced_grad);
    } else {
      direction = Eigen::LDLT<Eigen::MatrixXd>(reduced_neg_hess)
                      .solve(reduced_grad);
    }
    if (!direction.allFinite()) return false;

    // Accept within rounding slack of the current value: near the optimum
    // the true improvement of a Newton step falls below the floating-point
    // resolution of the log-likelihood while the gradient (which governs
    // convergence) still shrinks quadratically. A step must still move the
    // iterate, otherwise the search has stalled.
    const double slack = 32.0 * std::numeric_limits<double>::epsilon() *
                         (1.0 + std::abs(loglik));
    double step = 1.0;
    for (int halving = 0; halving < 60; ++halving) {
      const Eigen::VectorXd candidate = reduced + step * direction;
      if (candidate == reduced) break;
      const ScoreVector candidate_beta = embed(candidate);
      const double candidate_loglik = log_likelihood(candidate_beta, data);
      if (candidate_loglik >= loglik - slack) {
        reduced = candidate;
        beta = candidate_beta;
        loglik = candidate_loglik;
        return true;
      }
      step *= 0.5;
    }
    return false;
  };

  Eigen::VectorXd grad = gradient(beta, data);
  double grad_norm = grad.lpNorm<Eigen::Infinity>();
  while (grad_norm > opts.tol) {
    if (iterations >= opts.max_iterations) {
      throw MaxIterationsError("no convergence after " +
                               std::to_string(opts.max_iterations) +
                               " Newton iterations (grad sup-norm " +
                               std::to_string(grad_norm) + ")");
    }
    if (!newton_step(grad)) {
      throw MaxIterationsError(
          "line search stalled before reaching the gradient tolerance");
    }
    ++iterations;
    grad = gradient(beta, data);
    grad_norm = grad.lpNorm<Eigen::Infinity>();
  }
  // Polish: one extra Newton step once the tolerance is met drops the
  // residual gradient to machine scale (quadratic convergence).
  if (grad_norm > 0.0 && newton_step(grad)) {
    ++iterations;
    grad = gradient(beta, data);
    grad_norm = grad.lpNorm<Eigen::Infinity>();
  }

  return FitResult{std::move(beta), Constraint::sum(n), loglik,
                   iterations,      grad_norm,          true};
}

FitResult fit_with_constraint(const ComparisonData& data,
                              const Constraint& constraint,
                              const FitOptions& opts) {
  if (constraint.size() != data.n()) {
    throw DimensionMismatchError("constraint dimension does not match data");
  }
  require_identifiable(constraint);

  FitResult base = fit_sum_constraint(data, opts);
  ScoreVector gamma = shift_to_constraint(base.beta_hat, constraint);
  const double loglik = log_likelihood(gamma, data);

  const Eigen::VectorXd grad = gradient(gamma, data);
  const Eigen::VectorXd& alpha = constraint.alpha();
  const Eigen::VectorXd projected =
      grad - alpha * (alpha.dot(grad) / alpha.squaredNorm());
  const double grad_norm = projected.lpNorm<Eigen::Infinity>();

  return FitResult{std::move(gamma), constraint, loglik, base.iterations,
                   grad_norm,        base.converged && grad_norm <= opts.tol};
}

ScoreVector shift_to_constraint(const ScoreVector& beta,
                                const Constraint& constraint) {
  if (constraint.size() != beta.size()) {
    throw DimensionMismatchError("constraint dimension does not match scores");
  }
  require_identifiable(constraint);
  const Eigen::VectorXd& alpha = constraint.alpha();
  const double shift = alpha.dot(beta) / alpha.sum();
  return beta.array() - shift;
}

ScoreVector beta_from_w(const Eigen::VectorXd& w,
                        const Constraint& constraint) {
  if (constraint.size() != w.size()) {
    throw DimensionMismatchError("constraint dimension does not match w");
  }
  if (!w.allFinite() || (w.array() <= 0.0).any()) {
    throw NonPositiveWError("strength vector must be positive entrywise");
  }
  require_identifiable(constraint);
  const Eigen::VectorXd log_w = w.array().log();
  const Eigen::VectorXd& alpha = constraint.alpha();
  const double shift = alpha.dot(log_w) / alpha.sum();
  return log_w.array() - shift;
}

Eigen::VectorXd w_from_beta(const ScoreVector& beta) {
  if (beta.size() < 1) {
    throw InvalidArgumentError("score vector is empty");
  }
  if (!beta.allFinite()) {
    throw InvalidArgumentError("score vector has non-finite entries");
  }
  const Eigen::ArrayXd shifted = beta.array() - beta.maxCoeff();
  const Eigen::ArrayXd expd = shifted.exp();
  return expd / expd.sum();
}

}  // namespace btrank
