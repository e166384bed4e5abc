#include "btrank/inference.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "btrank/likelihood.hpp"

namespace btrank {

namespace {

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_sum_variance(const VarianceEstimate& var_sum) {
  if (!var_sum.constraint.is_sum()) {
    throw InvalidArgumentError(
        "expected a variance estimate under the sum constraint");
  }
}

void require_identifiable(const Constraint& constraint) {
  if (!constraint.identifiable()) {
    throw DegenerateConstraintError(
        "constraint is not identifying: 1^T alpha ~ 0");
  }
}

}  // namespace

Eigen::MatrixXd pseudoinverse_known_kernel(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  if (n != m.cols() || n < 1) {
    throw DimensionMismatchError("pseudoinverse input must be square");
  }
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.transpose()) > 1e-10 * scale) {
    throw NotSymmetricError("matrix is not symmetric");
  }
  if ((m * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() >
      1e-10 * scale * static_cast<double>(n)) {
    throw KernelMismatchError("matrix does not annihilate the ones vector");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolver(
      m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd eigenvalues = eigensolver.eigenvalues();
  const double rank_threshold = 1e-10 * eigenvalues.cwiseAbs().maxCoeff();
  const auto near_zero =
      (eigenvalues.cwiseAbs().array() <= rank_threshold).count();
  if (near_zero > 1) {
    throw KernelTooLargeError(
        std::to_string(near_zero) +
        " eigenvalues below the rank threshold; the kernel is larger than "
        "span(1), which signals disconnected data");
  }

  const Eigen::MatrixXd ones_block =
      Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd pinv = (m + ones_block).inverse() - ones_block;
  pinv = 0.5 * (pinv + pinv.transpose()).eval();
  return pinv;
}

VarianceEstimate variance_sum_constraint(const FitResult& fit,
                                         const ComparisonData& data) {
  if (!fit.constraint.is_sum()) {
    throw InvalidArgumentError(
        "variance_sum_constraint needs a sum-constraint fit");
  }
  if (!fit.converged) {
    throw InvalidArgumentError("fit did not converge");
  }
  if (fit.beta_hat.size() != data.n()) {
    throw DimensionMismatchError("fit dimension does not match data");
  }
  const Eigen::MatrixXd neg_hessian = -hessian(fit.beta_hat, data);
  Eigen::MatrixXd cov = pseudoinverse_known_kernel(neg_hessian);
  Eigen::VectorXd se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return VarianceEstimate{std::move(cov), fit.constraint, std::move(se)};
}

VarianceEstimate variance_general_constraint(const VarianceEstimate& var_sum,
                                             const Constraint& constraint) {
  require_sum_variance(var_sum);
  require_identifiable(constraint);
  if (constraint.size() != var_sum.cov.rows()) {
    throw DimensionMismatchError("constraint dimension does not match");
  }
  const auto n = var_sum.cov.rows();
  const Eigen::VectorXd& alpha = constraint.alpha();
  const Eigen::MatrixXd projector =
      Eigen::MatrixXd::Identity(n, n) -
      Eigen::VectorXd::Ones(n) * alpha.transpose() / alpha.sum();
  Eigen::MatrixXd cov = projector * var_sum.cov * projector.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  Eigen::VectorXd se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return VarianceEstimate{std::move(cov), constraint, std::move(se)};
}

PenroseResiduals penrose_residuals(const Eigen::MatrixXd& candidate,
                                   const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || candidate.rows() != candidate.cols() ||
      candidate.rows() != m.rows()) {
    throw DimensionMismatchError("penrose check needs matching square inputs");
  }
  const Eigen::MatrixXd a = -m;
  const Eigen::MatrixXd& x = candidate;
  const Eigen::MatrixXd ax = a * x;
  const Eigen::MatrixXd xa = x * a;
  PenroseResiduals residuals;
  const double tiny = 1e-300;
  residuals.axa = max_abs(ax * a - a) / std::max(tiny, max_abs(a));
  residuals.xax = max_abs(xa * x - x) / std::max(tiny, max_abs(x));
  residuals.ax_symmetry =
      max_abs(ax.transpose() - ax) / std::max(1.0, max_abs(ax));
  residuals.xa_symmetry =
      max_abs(xa.transpose() - xa) / std::max(1.0, max_abs(xa));
  return residuals;
}

bool check_reflexive_inverse(const Eigen::MatrixXd& candidate,
                             const Eigen::MatrixXd& m, double tol) {
  const PenroseResiduals residuals = penrose_residuals(candidate, m);
  return residuals.axa <= tol && residuals.xax <= tol;
}

double trace_excess(const VarianceEstimate& var_sum,
                    const Constraint& constraint) {
  require_sum_variance(var_sum);
  require_identifiable(constraint);
  if (constraint.size() != var_sum.cov.rows()) {
    throw DimensionMismatchError("constraint dimension does not match");
  }
  const Eigen::VectorXd& alpha = constraint.alpha();
  const double alpha_sum = alpha.sum();
  const double quadratic = alpha.dot(var_sum.cov * alpha);
  // The cross terms of the projector expansion vanish because cov * 1 = 0;
  // the remaining term carries Tr(11^T) = n.
  return static_cast<double>(var_sum.cov.rows()) * quadratic /
         (alpha_sum * alpha_sum);
}

std::vector<ConfidenceInterval> confidence_intervals(
    const FitResult& fit, const VarianceEstimate& var, double multiplier) {
  if (fit.beta_hat.size() != var.se.size()) {
    throw DimensionMismatchError("fit and variance dimensions differ");
  }
  if (!(multiplier >= 0.0)) {
    throw InvalidArgumentError("CI multiplier must be nonnegative");
  }
  std::vector<ConfidenceInterval> intervals(fit.beta_hat.size());
  for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i) {
    const double center = fit.beta_hat[i];
    const double half_width = multiplier * var.se[i];
    intervals[i] = {center, center - half_width, center + half_width};
  }
  return intervals;
}

}  // namespace btrank
