#include "rete/sampler/ppr.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "rete/error.hpp"

namespace rete {

PprScores approx_ppr(const AdjacencyIndex& adj, EntityId seed, const PprConfig& cfg) {
  if (seed.index() >= adj.num_nodes()) {
    throw Error(ErrorCode::kInvalidArgument, "PPR seed " + std::to_string(seed.value) + " out of range");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "PPR alpha must lie in (0, 1)");
  }
  if (adj.degree(seed) == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "PPR seed " + std::to_string(seed.value) + " is isolated; cannot personalize");
  }
  const double eps = cfg.effective_eps(adj.num_nodes());

  std::unordered_map<std::uint32_t, double> estimate;
  std::unordered_map<std::uint32_t, double> residual;
  std::deque<std::uint32_t> queue;
  std::unordered_set<std::uint32_t> queued;

  auto push = [&](std::uint32_t v) {
    double r = residual[v];
    residual[v] = 0.0;
    estimate[v] += cfg.alpha * r;
    const auto row = adj.neighbors(EntityId{v});
    const double share = (1.0 - cfg.alpha) * r / static_cast<double>(row.size());
    for (const auto& nb : row) {
      const std::uint32_t w = nb.node.value;
      double& rw = residual[w];
      rw += share;
      if (rw > eps * static_cast<double>(adj.degree(nb.node)) &&
          queued.insert(w).second) {
        queue.push_back(w);
      }
    }
  };

  residual[seed.value] = 1.0;
  push(seed.value);
  while (!queue.empty()) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    queued.erase(v);
    if (residual[v] > eps * static_cast<double>(adj.degree(EntityId{v}))) push(v);
  }

  PprScores out;
  out.reserve(estimate.size());
  for (auto [v, p] : estimate) out.emplace_back(EntityId{v}, p);
  std::sort(out.begin(), out.end());
  return out;
}

Subgraph ppr_subgraph(const AdjacencyIndex& adj, EntityId user, const PprConfig& cfg) {
  if (cfg.budget == 0) throw Error(ErrorCode::kInvalidArgument, "PPR budget must be >= 1");
  auto scores = approx_ppr(adj, user, cfg);
  std::vector<std::pair<EntityId, double>> candidates;
  for (const auto& [v, p] : scores) {
    if (v != user && p > cfg.theta) candidates.emplace_back(v, p);
  }
  auto better = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  const std::size_t keep = std::min(cfg.budget, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(), better);
  std::vector<EntityId> selected;
  selected.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) selected.push_back(candidates[i].first);
  return induced_subgraph(adj, user, std::move(selected), SamplerKind::kPpr,
                          !cfg.keep_disconnected);
}

}  // namespace rete
