#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "rete/tkg/dataset.hpp"

namespace rete {

/// Synthetic log with planted cluster preferences. Users, products and
/// queries are split evenly into clusters; every user keeps a few favourite
/// products and queries of its cluster and, at every step, emits
/// `favourite_products` product events, one noise event and
/// `favourite_queries` query events, each with its own timestamp.
struct PlantedConfig {
  std::size_t users = 20;
  std::size_t products = 30;
  std::size_t queries = 10;
  std::size_t clusters = 2;
  std::size_t steps = 28;
  std::size_t favourite_products = 3;
  std::size_t favourite_queries = 2;
  /// Probability that the extra product event leaves the favourites.
  double noise = 0.1;
  /// Redraw favourites (inside the current cluster) every this many steps; 0 keeps them.
  std::size_t redraw_every = 0;
  /// Chance that a redraw also moves the user to another cluster.
  double switch_probability = 0.0;
  /// From this step on every user prefers the next cluster.
  std::optional<std::size_t> flip_step;
  Split split;
  std::uint64_t seed = 0;

  /// Preferences drift (and sometimes change cluster) every three steps, and
  /// every user changes cluster at the third test step.
  static PlantedConfig drift();
};

struct PlantedData {
  EventLog log;
  std::vector<StaticTriple> triples;
  std::vector<std::size_t> user_cluster;  // by user index
};

PlantedData generate_planted(const PlantedConfig& cfg);

Dataset planted_dataset(const PlantedConfig& cfg);

/// Raw inputs in the ingest formats: `events.tsv` (user, target, action,
/// timestamp) and `product_graph.tsv` (head, relation, tail).
void write_planted(const PlantedData& data, const std::filesystem::path& dir);

}  // namespace rete
