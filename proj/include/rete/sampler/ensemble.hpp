#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rete/sampler/khop.hpp"
#include "rete/sampler/ppr.hpp"
#include "rete/sampler/subgraph.hpp"
#include "rete/tkg/dataset.hpp"

namespace rete {

using SamplerSpec = std::variant<PprConfig, KhopConfig>;

struct EnsembleConfig {
  std::vector<SamplerSpec> samplers;

  std::size_t size() const { return samplers.size(); }

  /// One PPR sampler and one randomized 3-hop sampler.
  static EnsembleConfig defaults();

  /// `ppr:alpha=0.15:budget=32;khop:k=3:budget=4` (keys optional, any order).
  static EnsembleConfig parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const EnsembleConfig&) const = default;
};

/// One subgraph per configured sampler, in order. Each k-hop sampler draws
/// from its own stream seeded from (its seed, position, user, `salt`).
std::vector<Subgraph> ensemble_sample(const AdjacencyIndex& adj, EntityId user,
                                      const EnsembleConfig& cfg, std::uint64_t salt = 0);

/// Subgraphs for every (user, step), sampled once before training.
class SubgraphCache {
 public:
  SubgraphCache() = default;
  SubgraphCache(std::size_t num_steps, std::size_t ensemble_size)
      : num_steps_(num_steps), ensemble_size_(ensemble_size) {}

  std::size_t num_steps() const { return num_steps_; }
  std::size_t ensemble_size() const { return ensemble_size_; }

  void put(EntityId user, std::size_t step, std::vector<Subgraph> subgraphs);
  const std::vector<Subgraph>& at(EntityId user, std::size_t step) const;
  bool contains(EntityId user, std::size_t step) const;
  std::vector<EntityId> users() const;

  /// Binary file: "RETESGC1" magic, u32 version, u32 steps, u32 ensemble size,
  /// u64 record count, then per record u32 user, u32 step, u32 sampler index,
  /// u8 source, u32 entity count, u32 entities[], u32 edge count, u32 pairs[].
  /// All integers little-endian.
  void save(const std::filesystem::path& path) const;
  static SubgraphCache load(const std::filesystem::path& path);

  bool operator==(const SubgraphCache&) const = default;

 private:
  std::size_t num_steps_ = 0;
  std::size_t ensemble_size_ = 0;
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<Subgraph>> records_;
};

/// Samples every user at every step. Users isolated in a snapshot get a
/// singleton subgraph per sampler.
SubgraphCache sample_all(const Dataset& data, const EnsembleConfig& cfg, std::uint64_t root_seed);

}  // namespace rete
