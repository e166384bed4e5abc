#pragma once

#include <Eigen/Core>

#include "btrank/comparison_data.hpp"

namespace btrank {

// Scores on the log-strength scale; P(i beats j) = sigmoid(beta_i - beta_j).
using ScoreVector = Eigen::VectorXd;

// 1 / (1 + e^-t), evaluated on the side that cannot overflow.
double sigmoid(double t);
// log sigmoid(t) without underflow for large |t|.
double log_sigmoid(double t);

// sum_{i != j} W(i,j) * log sigmoid(beta_i - beta_j). Finite for finite beta,
// invariant under beta -> beta + c * 1.
double log_likelihood(const ScoreVector& beta, const ComparisonData& data);

// Component i: sum_{j != i} [W(i,j) sigmoid(beta_j - beta_i)
//                            - W(j,i) sigmoid(beta_i - beta_j)].
// Pair terms are antisymmetric, so the entries sum to zero.
Eigen::VectorXd gradient(const ScoreVector& beta, const ComparisonData& data);

// -sum_{i<j} V(i,j) sigmoid(d) sigmoid(-d) (e_i - e_j)(e_i - e_j)^T with
// d = beta_i - beta_j. Symmetric, zero row sums; negative semi-definite with
// kernel span(1) when the comparison graph is connected.
Eigen::MatrixXd hessian(const ScoreVector& beta, const ComparisonData& data);

}  // namespace btrank
