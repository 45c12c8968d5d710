#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "rete/tkg/types.hpp"

namespace rete {

/// Uniform negatives per entity kind, never returning an excluded id.
class NegativeSampler {
 public:
  NegativeSampler(const EntityRegistry& entities, std::uint64_t seed);

  /// `n` draws with replacement from entities of `kind` outside `exclude`
  /// (sorted ascending). Empty when every candidate is excluded.
  std::vector<EntityId> draw(EntityKind kind, std::span<const EntityId> exclude, std::size_t n);

  const std::vector<EntityId>& pool(EntityKind kind) const { return pools_[static_cast<std::size_t>(kind)]; }

 private:
  std::mt19937_64 rng_;
  std::array<std::vector<EntityId>, 4> pools_;
};

}  // namespace rete
