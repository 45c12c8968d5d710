#include "rete/sampler/khop.hpp"

#include <random>
#include <unordered_set>

#include "rete/error.hpp"

namespace rete {

Subgraph khop_subgraph(const AdjacencyIndex& adj, EntityId user, const KhopConfig& cfg) {
  if (user.index() >= adj.num_nodes()) {
    throw Error(ErrorCode::kInvalidArgument, "k-hop user " + std::to_string(user.value) + " out of range");
  }
  if (cfg.k == 0 || cfg.budget == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k-hop sampler needs k >= 1 and budget >= 1");
  }
  std::mt19937_64 rng(cfg.seed);
  std::unordered_set<std::uint32_t> selected{user.value};
  std::vector<EntityId> picked;
  std::vector<EntityId> frontier{user};
  std::vector<EntityId> candidates;

  for (std::size_t hop = 0; hop < cfg.k && !frontier.empty(); ++hop) {
    std::vector<EntityId> next;
    for (EntityId node : frontier) {
      candidates.clear();
      for (const auto& nb : adj.neighbors(node)) {
        if (!selected.contains(nb.node.value)) candidates.push_back(nb.node);
      }
      const std::size_t take = std::min(cfg.budget, candidates.size());
      // partial Fisher-Yates
      for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
        std::swap(candidates[i], candidates[pick(rng)]);
        selected.insert(candidates[i].value);
        picked.push_back(candidates[i]);
        next.push_back(candidates[i]);
      }
    }
    frontier = std::move(next);
  }
  if (picked.empty()) {
    Subgraph sub = singleton_subgraph(user);
    sub.source = SamplerKind::kKhop;
    return sub;
  }
  return induced_subgraph(adj, user, std::move(picked), SamplerKind::kKhop);
}

}  // namespace rete
