#include "rete/tkg/snapshot.hpp"

#include <algorithm>
#include <tuple>

#include "rete/error.hpp"
#include "rete/tkg/adjacency.hpp"

namespace rete {

std::vector<SnapshotGraph> build_snapshots(const EventLog& log, const TimeSegmentation& seg,
                                           const std::vector<StaticTriple>& triples) {
  auto shared_triples = std::make_shared<const std::vector<StaticTriple>>(triples);
  auto shared_entities = std::make_shared<const EntityRegistry>(log.entities);
  std::vector<SnapshotGraph> snaps(seg.num_steps());
  for (std::size_t t = 0; t < snaps.size(); ++t) {
    snaps[t].step = t;
    snaps[t].triples = shared_triples;
    snaps[t].entities = shared_entities;
  }
  for (const auto& e : log.events) snaps[seg.step_of(e.timestamp)].interactions.push_back(e);
  return snaps;
}

AdjacencyIndex AdjacencyIndex::from_edges(std::size_t num_nodes,
                                          std::span<const EdgeRecord> edges) {
  struct Directed {
    std::uint32_t from, to, relation;
  };
  std::vector<Directed> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.a.index() >= num_nodes || e.b.index() >= num_nodes) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (e.a == e.b) continue;
    directed.push_back({e.a.value, e.b.value, e.relation.value});
    directed.push_back({e.b.value, e.a.value, e.relation.value});
  }
  std::sort(directed.begin(), directed.end(), [](const Directed& x, const Directed& y) {
    return std::tie(x.from, x.to, x.relation) < std::tie(y.from, y.to, y.relation);
  });

  AdjacencyIndex adj;
  adj.offsets_.assign(num_nodes + 1, 0);
  for (std::size_t k = 0; k < directed.size(); ++k) {
    const auto& d = directed[k];
    if (k > 0 && directed[k - 1].from == d.from && directed[k - 1].to == d.to) {
      ++adj.entries_.back().count;
      continue;
    }
    adj.entries_.push_back(Neighbor{EntityId{d.to}, RelationId{d.relation}, 1});
    ++adj.offsets_[d.from + 1];
  }
  for (std::size_t i = 0; i < num_nodes; ++i) adj.offsets_[i + 1] += adj.offsets_[i];
  return adj;
}

bool AdjacencyIndex::has_edge(EntityId u, EntityId v) const {
  auto row = neighbors(u);
  auto it = std::lower_bound(row.begin(), row.end(), v,
                             [](const Neighbor& n, EntityId id) { return n.node < id; });
  return it != row.end() && it->node == v;
}

AdjacencyIndex to_adjacency(const SnapshotGraph& snap) {
  std::vector<EdgeRecord> edges;
  edges.reserve(snap.interactions.size() + (snap.triples ? snap.triples->size() : 0));
  for (const auto& e : snap.interactions) edges.push_back({e.user, e.target, e.relation});
  if (snap.triples) {
    for (const auto& t : *snap.triples) edges.push_back({t.head, t.tail, t.relation});
  }
  return AdjacencyIndex::from_edges(snap.num_entities(), edges);
}

}  // namespace rete
