#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "rete/tkg/adjacency.hpp"
#include "rete/tkg/types.hpp"

namespace rete {

enum class SamplerKind : std::uint8_t { kPpr = 0, kKhop = 1, kSingleton = 2 };

std::string_view to_string(SamplerKind kind);

/// A user-centred induced subgraph. `entities[0]` is always the centre; the
/// remaining entities are in ascending global id order. Edges use local ids,
/// each stored once as (a, b) with a < b, sorted.
struct Subgraph {
  EntityId center;
  std::vector<EntityId> entities;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  SamplerKind source = SamplerKind::kSingleton;

  std::size_t size() const { return entities.size(); }
  bool contains(EntityId id) const;

  /// Local neighbour lists derived from `edges`.
  std::vector<std::vector<std::uint32_t>> local_neighbors() const;
  /// Local degree of each entity.
  std::vector<std::size_t> degrees() const;

  bool operator==(const Subgraph&) const = default;
};

/// Subgraph on `center` plus `selected`, with every adjacency edge between two
/// selected entities. When `drop_unreachable` is set, entities not reachable
/// from the centre through the induced edges are removed.
Subgraph induced_subgraph(const AdjacencyIndex& adj, EntityId center,
                          std::vector<EntityId> selected, SamplerKind source,
                          bool drop_unreachable = false);

Subgraph singleton_subgraph(EntityId center);

}  // namespace rete
