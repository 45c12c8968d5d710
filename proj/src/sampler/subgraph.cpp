#include "rete/sampler/subgraph.hpp"

#include <algorithm>
#include <queue>

namespace rete {

std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kPpr: return "ppr";
    case SamplerKind::kKhop: return "khop";
    case SamplerKind::kSingleton: return "singleton";
  }
  return "unknown";
}

bool Subgraph::contains(EntityId id) const {
  return std::find(entities.begin(), entities.end(), id) != entities.end();
}

std::vector<std::vector<std::uint32_t>> Subgraph::local_neighbors() const {
  std::vector<std::vector<std::uint32_t>> out(entities.size());
  for (auto [a, b] : edges) {
    out[a].push_back(b);
    out[b].push_back(a);
  }
  for (auto& row : out) std::sort(row.begin(), row.end());
  return out;
}

std::vector<std::size_t> Subgraph::degrees() const {
  std::vector<std::size_t> deg(entities.size(), 0);
  for (auto [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

Subgraph singleton_subgraph(EntityId center) {
  Subgraph sub;
  sub.center = center;
  sub.entities = {center};
  sub.source = SamplerKind::kSingleton;
  return sub;
}

namespace {

Subgraph build_induced(const AdjacencyIndex& adj, EntityId center, std::vector<EntityId> rest,
                       SamplerKind source) {
  std::sort(rest.begin(), rest.end());
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
  rest.erase(std::remove(rest.begin(), rest.end(), center), rest.end());

  Subgraph sub;
  sub.center = center;
  sub.source = source;
  sub.entities.reserve(rest.size() + 1);
  sub.entities.push_back(center);
  sub.entities.insert(sub.entities.end(), rest.begin(), rest.end());

  auto local_of = [&](EntityId g) -> std::int64_t {
    if (g == center) return 0;
    auto it = std::lower_bound(rest.begin(), rest.end(), g);
    if (it == rest.end() || *it != g) return -1;
    return 1 + (it - rest.begin());
  };
  for (std::uint32_t a = 0; a < sub.entities.size(); ++a) {
    for (const auto& nb : adj.neighbors(sub.entities[a])) {
      auto b = local_of(nb.node);
      if (b > static_cast<std::int64_t>(a)) sub.edges.emplace_back(a, static_cast<std::uint32_t>(b));
      else if (b >= 0 && b < static_cast<std::int64_t>(a)) sub.edges.emplace_back(static_cast<std::uint32_t>(b), a);
    }
  }
  std::sort(sub.edges.begin(), sub.edges.end());
  sub.edges.erase(std::unique(sub.edges.begin(), sub.edges.end()), sub.edges.end());
  return sub;
}

}  // namespace

Subgraph induced_subgraph(const AdjacencyIndex& adj, EntityId center,
                          std::vector<EntityId> selected, SamplerKind source,
                          bool drop_unreachable) {
  Subgraph sub = build_induced(adj, center, std::move(selected), source);
  if (!drop_unreachable) return sub;

  auto nbrs = sub.local_neighbors();
  std::vector<bool> seen(sub.size(), false);
  std::queue<std::uint32_t> queue;
  seen[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop();
    for (auto v : nbrs[u]) {
      if (!seen[v]) {
        seen[v] = true;
        queue.push(v);
      }
    }
  }
  if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return sub;
  std::vector<EntityId> kept;
  for (std::size_t i = 1; i < sub.size(); ++i) {
    if (seen[i]) kept.push_back(sub.entities[i]);
  }
  return build_induced(adj, center, std::move(kept), source);
}

}  // namespace rete
