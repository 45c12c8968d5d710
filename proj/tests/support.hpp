#pragma once

#include <Eigen/Dense>

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rete/tkg/adjacency.hpp"
#include "rete/tkg/ingest.hpp"

namespace rete::testing {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                     double bound = 1.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

inline EdgeRecord edge(std::uint32_t a, std::uint32_t b, std::uint32_t rel = 0) {
  return {EntityId{a}, EntityId{b}, RelationId{rel}};
}

/// Random spanning tree plus `extra` random chords.
inline std::vector<EdgeRecord> random_connected_edges(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  std::vector<EdgeRecord> edges;
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::uint32_t> parent(0, v - 1);
    edges.push_back(edge(parent(rng), v));
  }
  std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t k = 0; k < extra; ++k) {
    const auto a = any(rng), b = any(rng);
    if (a != b) edges.push_back(edge(a, b));
  }
  return edges;
}

inline AdjacencyIndex random_connected_graph(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
  const auto edges = random_connected_edges(n, extra, rng);
  return AdjacencyIndex::from_edges(n, edges);
}

/// Dense personalized PageRank by power iteration on the random-walk matrix.
inline Eigen::RowVectorXd exact_ppr(const AdjacencyIndex& adj, EntityId seed, double alpha,
                                    double tol = 1e-13, int max_iterations = 1000000) {
  const auto n = static_cast<Eigen::Index>(adj.num_nodes());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    const auto nbrs = adj.neighbors(EntityId{static_cast<std::uint32_t>(u)});
    for (const Neighbor& nb : nbrs) p(u, nb.node.value) = 1.0 / static_cast<double>(nbrs.size());
  }
  Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
  e(seed.value) = 1.0;
  Eigen::RowVectorXd pi = e;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::RowVectorXd next = alpha * e + (1.0 - alpha) * pi * p;
    const double change = (next - pi).cwiseAbs().maxCoeff();
    pi = next;
    if (change < tol) break;
  }
  return pi;
}

inline EventLog parse_events(const std::string& text) {
  std::istringstream in(text);
  return ingest_events(in, ActionTable::defaults());
}

}  // namespace rete::testing
