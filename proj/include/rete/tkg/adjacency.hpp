#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rete/tkg/snapshot.hpp"
#include "rete/tkg/types.hpp"

namespace rete {

struct Neighbor {
  EntityId node;
  RelationId relation;     // smallest relation id among collapsed parallel edges
  std::uint32_t count = 1;  // number of parallel edges collapsed into this entry
};

struct EdgeRecord {
  EntityId a;
  EntityId b;
  RelationId relation;
};

/// Undirected compressed adjacency. Each unordered pair appears once in each
/// endpoint's row; rows are sorted by neighbor id. Immutable once built.
class AdjacencyIndex {
 public:
  AdjacencyIndex() : offsets_(1, 0) {}

  /// Builds from undirected edges; parallel edges collapse, self loops are dropped.
  static AdjacencyIndex from_edges(std::size_t num_nodes, std::span<const EdgeRecord> edges);

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_directed_edges() const { return entries_.size(); }

  std::size_t degree(EntityId u) const {
    return offsets_[u.index() + 1] - offsets_[u.index()];
  }

  std::span<const Neighbor> neighbors(EntityId u) const {
    return {entries_.data() + offsets_[u.index()], degree(u)};
  }

  bool has_edge(EntityId u, EntityId v) const;
  std::span<const std::size_t> offsets() const { return offsets_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> entries_;
};

AdjacencyIndex to_adjacency(const SnapshotGraph& snap);

}  // namespace rete
