#pragma once

#include <utility>
#include <vector>

#include "rete/sampler/subgraph.hpp"
#include "rete/tkg/adjacency.hpp"

namespace rete {

struct PprConfig {
  double alpha = 0.15;  // teleport probability
  /// Push tolerance. Non-positive means 1e-4 / number of entities.
  double eps = 0.0;
  std::size_t budget = 32;  // entities selected besides the user
  double theta = 0.0;       // scores must be strictly above this
  bool keep_disconnected = false;

  double effective_eps(std::size_t num_entities) const {
    return eps > 0.0 ? eps : 1e-4 / static_cast<double>(std::max<std::size_t>(num_entities, 1));
  }
  bool operator==(const PprConfig&) const = default;
};

/// Sparse PPR estimate, sorted by entity id.
using PprScores = std::vector<std::pair<EntityId, double>>;

/// Forward-push approximation of personalized PageRank with teleport `alpha`
/// seeded at `seed`. The seed is pushed once unconditionally; afterwards any
/// node whose residual exceeds eps * degree is pushed. On return every node
/// satisfies |p(v) - pi(v)| <= eps * degree(v).
PprScores approx_ppr(const AdjacencyIndex& adj, EntityId seed, const PprConfig& cfg);

/// User plus the top-`budget` entities by approximate PPR with score > theta
/// (ties by ascending id), with all adjacency edges among them.
Subgraph ppr_subgraph(const AdjacencyIndex& adj, EntityId user, const PprConfig& cfg);

}  // namespace rete
