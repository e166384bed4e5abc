#pragma once

#include <vector>

#include <Eigen/Core>

#include "btrank/comparison_data.hpp"
#include "btrank/solver.hpp"

namespace btrank {

// Estimated covariance of fitted scores under a given constraint.
// cov is symmetric with nonnegative diagonal and cov * alpha = 0: the
// constrained combination of scores carries no variance.
struct VarianceEstimate {
  Eigen::MatrixXd cov;
  Constraint constraint;
  Eigen::VectorXd se;  // sqrt of the diagonal
};

// Moore-Penrose pseudoinverse of a symmetric matrix whose kernel is exactly
// span(1), computed through the rank-repair identity
//   M^+ = (M + 11^T/n)^{-1} - 11^T/n.
// Throws NotSymmetricError / KernelMismatchError when the preconditions
// fail and KernelTooLargeError when more than one eigenvalue falls below
// the rank threshold (disconnected data).
Eigen::MatrixXd pseudoinverse_known_kernel(const Eigen::MatrixXd& m);

// Plug-in covariance of the sum-constrained MLE: (-H(beta_hat))^+.
VarianceEstimate variance_sum_constraint(const FitResult& fit,
                                         const ComparisonData& data);

// Covariance after translating the fit onto alpha^T beta = 0:
//   cov_gamma = (I - 1 alpha^T / 1^T alpha) cov_beta (I - alpha 1^T / 1^T alpha).
VarianceEstimate variance_general_constraint(const VarianceEstimate& var_sum,
                                             const Constraint& constraint);

// Relative residuals of the four Penrose conditions of `candidate` as a
// pseudoinverse of A = -m. A reflexive generalized inverse satisfies the
// first two; the pseudoinverse additionally the two symmetry conditions.
struct PenroseResiduals {
  double axa = 0.0;          // ||A X A - A|| / ||A||
  double xax = 0.0;          // ||X A X - X|| / ||X||
  double ax_symmetry = 0.0;  // ||(AX)^T - AX|| / max(1, ||AX||)
  double xa_symmetry = 0.0;  // ||(XA)^T - XA|| / max(1, ||XA||)
};
PenroseResiduals penrose_residuals(const Eigen::MatrixXd& candidate,
                                   const Eigen::MatrixXd& m);

// True iff candidate is a reflexive generalized inverse of A = -m at the
// given relative tolerance.
bool check_reflexive_inverse(const Eigen::MatrixXd& candidate,
                             const Eigen::MatrixXd& m, double tol);

// trace(cov_gamma) - trace(cov_beta) for the constraint alpha, via the
// closed form n * alpha^T cov_beta alpha / (1^T alpha)^2. Zero iff alpha is
// proportional to 1; strictly positive otherwise, which is what makes the
// sum constraint the total-variance minimizer.
double trace_excess(const VarianceEstimate& var_sum,
                    const Constraint& constraint);

struct ConfidenceInterval {
  double center = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// center_i = beta_hat_i, half width multiplier * se_i. multiplier must be
// nonnegative; zero collapses every interval to its center.
std::vector<ConfidenceInterval> confidence_intervals(
    const FitResult& fit, const VarianceEstimate& var, double multiplier = 2.0);

}  // namespace btrank
