#include <cmath>

#include <doctest.h>

#include "btrank/inference.hpp"
#include "btrank/likelihood.hpp"
#include "oracles.hpp"

using namespace btrank;
namespace bt = btrank::testing;

namespace {

double rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = std::max(1.0, want.cwiseAbs().maxCoeff());
  return (got - want).cwiseAbs().maxCoeff() / scale;
}

// Laplacian-style symmetric matrix with kernel span(1): random positive
// weights on a cycle plus random chords.
Eigen::MatrixXd random_kernel_ones_matrix(Rng& rng, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  auto add_edge = [&](int i, int j, double weight) {
    m(i, i) += weight;
    m(j, j) += weight;
    m(i, j) -= weight;
    m(j, i) -= weight;
  };
  for (int i = 0; i < n; ++i) {
    add_edge(i, (i + 1) % n, 0.2 + rng.next_unit());
  }
  for (int extra = 0; extra < n; ++extra) {
    const int i = static_cast<int>(rng.next_int(0, n - 1));
    int j = static_cast<int>(rng.next_int(0, n - 2));
    if (j >= i) ++j;
    if (rng.bernoulli(0.5)) add_edge(i, j, rng.next_unit());
  }
  return m;
}

}  // namespace

TEST_CASE("pseudoinverse of the 2x2 worked example") {
  Eigen::MatrixXd m(2, 2);
  m << -1.0, 1.0, 1.0, -1.0;
  Eigen::MatrixXd expected(2, 2);
  expected << -0.25, 0.25, 0.25, -0.25;

  const Eigen::MatrixXd pinv = pseudoinverse_known_kernel(m);
  CHECK(rel_error(pinv, expected) < 1e-12);
  CHECK(rel_error(pinv, bt::eigen_pseudoinverse(m)) < 1e-12);
  CHECK((pinv * Eigen::VectorXd::Ones(2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pseudoinverse is an involution and matches the spectral oracle") {
  Rng rng(47);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = static_cast<int>(rng.next_int(3, 8));
    const Eigen::MatrixXd m = random_kernel_ones_matrix(rng, n);
    const Eigen::MatrixXd pinv = pseudoinverse_known_kernel(m);
    CHECK(rel_error(pinv, bt::eigen_pseudoinverse(m)) < 1e-9);
    CHECK(rel_error(pseudoinverse_known_kernel(pinv), m) < 1e-9);
    CHECK((pinv * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <
          1e-12 * std::max(1.0, pinv.cwiseAbs().maxCoeff()) * n);
  }
}

TEST_CASE("pseudoinverse rejects bad inputs") {
  Eigen::MatrixXd asym(2, 2);
  asym << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(pseudoinverse_known_kernel(asym), NotSymmetricError);

  CHECK_THROWS_AS(pseudoinverse_known_kernel(Eigen::MatrixXd::Identity(3, 3)),
                  KernelMismatchError);

  // two disconnected blocks -> two zero eigenvalues
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(4, 4);
  blocks(0, 0) = blocks(1, 1) = 1.0;
  blocks(0, 1) = blocks(1, 0) = -1.0;
  blocks(2, 2) = blocks(3, 3) = 2.0;
  blocks(2, 3) = blocks(3, 2) = -2.0;
  CHECK_THROWS_AS(pseudoinverse_known_kernel(blocks), KernelTooLargeError);
}

TEST_CASE("variance under the sum constraint on the worked example") {
  const auto data = bt::data_from_wins({{0, 3}, {1, 0}});
  const FitResult fit = fit_sum_constraint(data);
  const VarianceEstimate var = variance_sum_constraint(fit, data);

  Eigen::MatrixXd expected(2, 2);
  expected << 1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0;
  CHECK(rel_error(var.cov, expected) < 1e-10);
  CHECK(var.se[0] == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-10));
  CHECK((var.cov * Eigen::VectorXd::Ones(2)).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::MatrixXd hess = hessian(fit.beta_hat, data);
  const PenroseResiduals residuals = penrose_residuals(var.cov, hess);
  CHECK(residuals.axa < 1e-10);
  CHECK(residuals.xax < 1e-10);
  CHECK(residuals.ax_symmetry < 1e-10);
  CHECK(residuals.xa_symmetry < 1e-10);
}

TEST_CASE("penrose suite over random connected data") {
  Rng rng(53);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = static_cast<int>(rng.next_int(3, 8));
    const auto data = bt::random_connected_data(rng, n);
    const FitResult fit = fit_sum_constraint(data);
    const VarianceEstimate var = variance_sum_constraint(fit, data);
    const Eigen::MatrixXd hess = hessian(fit.beta_hat, data);

    const PenroseResiduals residuals = penrose_residuals(var.cov, hess);
    CHECK(residuals.axa < 1e-8);
    CHECK(residuals.xax < 1e-8);
    CHECK(residuals.ax_symmetry < 1e-8);
    CHECK(residuals.xa_symmetry < 1e-8);

    // rank-repair path versus the spectral oracle
    CHECK(rel_error(var.cov, bt::eigen_pseudoinverse(-hess)) < 1e-9);
  }
}

TEST_CASE("variance transform to a general constraint") {
  Rng rng(59);
  const auto data = bt::random_connected_data(rng, 4);
  const FitResult fit = fit_sum_constraint(data);
  const VarianceEstimate var_sum = variance_sum_constraint(fit, data);
  const Eigen::MatrixXd hess = hessian(fit.beta_hat, data);

  SUBCASE("reference constraint zeroes its row and column exactly") {
    const VarianceEstimate var_ref =
        variance_general_constraint(var_sum, Constraint::reference(0, 4));
    for (int k = 0; k < 4; ++k) {
      CHECK(var_ref.cov(0, k) == 0.0);
      CHECK(var_ref.cov(k, 0) == 0.0);
    }
    CHECK(var_ref.se[0] == 0.0);
    // reflexive generalized inverse, but not the pseudoinverse
    CHECK(check_reflexive_inverse(var_ref.cov, hess, 1e-8));
    const PenroseResiduals residuals = penrose_residuals(var_ref.cov, hess);
    CHECK(residuals.ax_symmetry > 1e-4);
  }

  SUBCASE("sum constraint is a no-op") {
    const VarianceEstimate same =
        variance_general_constraint(var_sum, Constraint::sum(4));
    CHECK(rel_error(same.cov, var_sum.cov) < 1e-12);
  }

  SUBCASE("random constraints give reflexive inverses annihilating alpha") {
    for (int k = 0; k < 8; ++k) {
      Eigen::VectorXd alpha = bt::random_scores(rng, 4, 1.0);
      if (std::abs(alpha.sum()) < 0.25) alpha[0] += 1.0;
      const Constraint constraint{alpha};
      const VarianceEstimate var =
          variance_general_constraint(var_sum, constraint);
      CHECK(check_reflexive_inverse(var.cov, hess, 1e-8));
      const double scale =
          std::max(1.0, var.cov.cwiseAbs().maxCoeff()) * alpha.lpNorm<1>();
      CHECK((var.cov * alpha).cwiseAbs().maxCoeff() <= 1e-12 * scale);
      CHECK((var.cov - var.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((var.cov.diagonal().array() >= 0.0).all());
    }
  }

  SUBCASE("degenerate constraint is rejected") {
    Eigen::VectorXd alpha(4);
    alpha << 1.0, -1.0, 1.0, -1.0;
    CHECK_THROWS_AS(variance_general_constraint(var_sum, Constraint{alpha}),
                    DegenerateConstraintError);
    CHECK_THROWS_AS(trace_excess(var_sum, Constraint{alpha}),
                    DegenerateConstraintError);
  }
}

TEST_CASE("trace excess equals the explicit trace difference") {
  // Two-object worked example: cov_beta = K/3, alpha = e1. The transformed
  // covariance is diag(0, 4/3) -- the classical log-odds variance
  // 1/W12 + 1/W21 = 1/3 + 1 -- so the excess is 4/3 - 2/3 = 2/3.
  const auto data = bt::data_from_wins({{0, 3}, {1, 0}});
  const FitResult fit = fit_sum_constraint(data);
  const VarianceEstimate var_sum = variance_sum_constraint(fit, data);
  const Constraint reference = Constraint::reference(0, 2);

  const VarianceEstimate var_ref =
      variance_general_constraint(var_sum, reference);
  CHECK(var_ref.cov(1, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(var_ref.cov.trace() == doctest::Approx(4.0 / 3.0).epsilon(1e-10));

  const double excess = trace_excess(var_sum, reference);
  CHECK(excess == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(excess == doctest::Approx(var_ref.cov.trace() - var_sum.cov.trace())
                      .epsilon(1e-10));
}

TEST_CASE("trace excess is positive off span(1) and zero on it") {
  Rng rng(61);
  const auto data = bt::random_connected_data(rng, 5);
  const FitResult fit = fit_sum_constraint(data);
  const VarianceEstimate var_sum = variance_sum_constraint(fit, data);

  CHECK(std::abs(trace_excess(var_sum, Constraint::sum(5))) < 1e-12);

  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd alpha = bt::random_scores(rng, 5, 1.0);
    if (std::abs(alpha.sum()) < 0.25) alpha[0] += 1.0;
    const Constraint constraint{alpha};
    const double excess = trace_excess(var_sum, constraint);
    CHECK(excess > 0.0);

    const VarianceEstimate var =
        variance_general_constraint(var_sum, constraint);
    const double explicit_diff = var.cov.trace() - var_sum.cov.trace();
    const double scale = std::max(
        {1.0, std::abs(var.cov.trace()), std::abs(var_sum.cov.trace())});
    CHECK(std::abs(excess - explicit_diff) <= 1e-10 * scale);
  }
}

TEST_CASE("check_reflexive_inverse rejects the zero matrix") {
  Eigen::MatrixXd m(2, 2);
  m << -1.0, 1.0, 1.0, -1.0;
  CHECK_FALSE(check_reflexive_inverse(Eigen::MatrixXd::Zero(2, 2), m, 1e-8));
}

TEST_CASE("confidence intervals") {
  const auto data = bt::data_from_wins({{0, 3}, {1, 0}});
  const FitResult fit = fit_sum_constraint(data);
  const VarianceEstimate var = variance_sum_constraint(fit, data);

  const auto two_se = confidence_intervals(fit, var, 2.0);
  const double half_width = 2.0 * std::sqrt(1.0 / 3.0);
  CHECK(two_se[0].center == doctest::Approx(0.549306).epsilon(1e-6));
  CHECK(two_se[0].high - two_se[0].center ==
        doctest::Approx(half_width).epsilon(1e-6));
  CHECK(two_se[0].high - two_se[0].low ==
        doctest::Approx(2.0 * 1.154701).epsilon(1e-6));

  const auto collapsed = confidence_intervals(fit, var, 0.0);
  CHECK(collapsed[0].low == collapsed[0].center);
  CHECK(collapsed[0].high == collapsed[0].center);

  CHECK_THROWS_AS(confidence_intervals(fit, var, -1.0), InvalidArgumentError);

  // reference object under alpha = e_i: degenerate interval at the point
  const VarianceEstimate var_ref =
      variance_general_constraint(var, Constraint::reference(0, 2));
  const FitResult fit_ref =
      fit_with_constraint(data, Constraint::reference(0, 2));
  const auto degenerate = confidence_intervals(fit_ref, var_ref, 2.0);
  CHECK(degenerate[0].low == degenerate[0].center);
  CHECK(degenerate[0].high == degenerate[0].center);
}

TEST_CASE("variance_sum_constraint guards its preconditions") {
  const auto data = bt::data_from_wins({{0, 3}, {1, 0}});
  const FitResult ref_fit =
      fit_with_constraint(data, Constraint::reference(0, 2));
  CHECK_THROWS_AS(variance_sum_constraint(ref_fit, data),
                  InvalidArgumentError);
}
