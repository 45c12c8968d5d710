#pragma once

#include <cstdint>

#include "rete/sampler/subgraph.hpp"
#include "rete/tkg/adjacency.hpp"

namespace rete {

struct KhopConfig {
  std::size_t k = 3;       // hops
  std::size_t budget = 4;  // neighbours drawn per expanded node
  std::uint64_t seed = 0;

  bool operator==(const KhopConfig&) const = default;
};

/// Randomized BFS: each frontier node draws up to `budget` of its not yet
/// selected neighbours uniformly without replacement, for `k` hops.
/// Deterministic in `cfg.seed`. An isolated user yields a singleton.
Subgraph khop_subgraph(const AdjacencyIndex& adj, EntityId user, const KhopConfig& cfg);

}  // namespace rete
