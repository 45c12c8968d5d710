#pragma once

#include <filesystem>
#include <vector>

#include "rete/tkg/adjacency.hpp"
#include "rete/tkg/segmentation.hpp"
#include "rete/tkg/snapshot.hpp"
#include "rete/tkg/types.hpp"

namespace rete {

/// Everything downstream stages need: the filtered log, the product graph,
/// the time segmentation and per-step snapshots with their adjacency.
struct Dataset {
  EventLog log;
  std::vector<StaticTriple> triples;
  TimeSegmentation segmentation;
  std::vector<SnapshotGraph> snapshots;
  std::vector<AdjacencyIndex> adjacency;

  std::size_t num_steps() const { return snapshots.size(); }
  const EntityRegistry& entities() const { return log.entities; }

  static Dataset assemble(EventLog log, std::vector<StaticTriple> triples, std::size_t num_steps,
                          const Split& split,
                          SegmentationRule rule = SegmentationRule::kEqualCount);
};

/// `entities.tsv` (id, name, kind) and `relations.tsv` (id, name, kind).
void write_registries(const EventLog& log, const std::filesystem::path& dir);

/// Snapshot store: registries plus dense `events.tsv`, `triples.tsv` and
/// `segmentation.tsv`. Written deterministically.
void save_dataset(const Dataset& data, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace rete
