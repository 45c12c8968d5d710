#pragma once

#include <memory>
#include <vector>

#include "rete/tkg/segmentation.hpp"
#include "rete/tkg/types.hpp"

namespace rete {

/// G^t: the interaction edges of one step plus the full static product graph.
struct SnapshotGraph {
  std::size_t step = 0;
  std::vector<Event> interactions;
  std::shared_ptr<const std::vector<StaticTriple>> triples;
  std::shared_ptr<const EntityRegistry> entities;

  std::size_t num_entities() const { return entities ? entities->size() : 0; }
};

std::vector<SnapshotGraph> build_snapshots(const EventLog& log, const TimeSegmentation& seg,
                                           const std::vector<StaticTriple>& triples);

}  // namespace rete
