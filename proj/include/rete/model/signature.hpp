#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "rete/error.hpp"
#include "rete/sampler/subgraph.hpp"

namespace rete {

/// Dense symmetric adjacency of a subgraph in local ids.
template <class Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dense_adjacency(const Subgraph& sub) {
  const auto n = static_cast<Eigen::Index>(sub.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (const auto& [u, v] : sub.edges) {
    a(u, v) = Scalar(1);
    a(v, u) = Scalar(1);
  }
  return a;
}

struct PowerIterationResult {
  Eigen::VectorXd vector;
  double eigenvalue = 0.0;
  long iterations = 0;
};

/// Leading eigenvector of a symmetric non-negative matrix, iterating on
/// (A + I) from the all-ones vector until successive iterates differ by less
/// than `tol` in max-norm. The shift keeps bipartite graphs (eigenvalues
/// +lambda and -lambda) from oscillating. The sign is fixed so that the
/// largest-magnitude component is positive.
template <class Derived>
PowerIterationResult leading_eigenvector(const Eigen::MatrixBase<Derived>& a, double tol = 1e-10,
                                         long max_iterations = 100000) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  for (long it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd next = a.template cast<double>() * v + v;
    const double norm = next.norm();
    if (norm == 0.0) throw Error(ErrorCode::kNumeric, "power iteration collapsed to zero");
    next /= norm;
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (change < tol) {
      Eigen::Index peak = 0;
      v.cwiseAbs().maxCoeff(&peak);
      if (v(peak) < 0) v = -v;
      const double lambda = v.dot(a.template cast<double>() * v);
      return {v, lambda, it};
    }
  }
  throw Error(ErrorCode::kNumeric,
              "power iteration did not converge in " + std::to_string(max_iterations) + " steps");
}

/// Information a user keeps after unboundedly many rounds of mean-style
/// neighbour aggregation restricted to its subgraph:
/// sqrt(deg(u) / sum_v deg(v)) * e^T X, with e the leading eigenvector of the
/// subgraph adjacency and X the |entities| x d initial embeddings in local order.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> infinite_depth_signature(
    const Subgraph& sub, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<Eigen::Index>(sub.size());
  if (x.rows() != n) {
    throw Error(ErrorCode::kShape, "signature: " + std::to_string(x.rows()) + " embedding rows for " +
                                       std::to_string(n) + " entities");
  }
  if (sub.edges.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "signature: subgraph of user " +
                                                 std::to_string(sub.center.value) + " has no edges");
  }
  const auto neighbors = sub.local_neighbors();
  std::vector<bool> seen(sub.size(), false);
  std::queue<std::uint32_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : neighbors[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  if (reached != sub.size()) {
    throw Error(ErrorCode::kInvalidArgument, "signature: subgraph of user " +
                                                 std::to_string(sub.center.value) +
                                                 " is not connected from its centre");
  }

  const auto degrees = sub.degrees();
  double total = 0.0;
  for (auto deg : degrees) total += static_cast<double>(deg);
  const double weight = std::sqrt(static_cast<double>(degrees[0]) / total);
  const Eigen::VectorXd e = leading_eigenvector(dense_adjacency<double>(sub)).vector;
  return (Scalar(weight) * (e.cast<Scalar>().transpose() * x)).eval();
}

}  // namespace rete
