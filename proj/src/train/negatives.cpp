#include "rete/train/negatives.hpp"

#include <algorithm>

namespace rete {

NegativeSampler::NegativeSampler(const EntityRegistry& entities, std::uint64_t seed) : rng_(seed) {
  for (EntityKind kind : {EntityKind::kUser, EntityKind::kProduct, EntityKind::kQuery, EntityKind::kAttribute}) {
    pools_[static_cast<std::size_t>(kind)] = entities.of_kind(kind);
  }
}

std::vector<EntityId> NegativeSampler::draw(EntityKind kind, std::span<const EntityId> exclude,
                                            std::size_t n) {
  const auto& pool = pools_[static_cast<std::size_t>(kind)];
  std::size_t excluded = 0;
  for (EntityId id : pool) excluded += std::binary_search(exclude.begin(), exclude.end(), id) ? 1 : 0;
  if (excluded == pool.size()) return {};

  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<EntityId> out;
  out.reserve(n);
  while (out.size() < n) {
    const EntityId id = pool[pick(rng_)];
    if (!std::binary_search(exclude.begin(), exclude.end(), id)) out.push_back(id);
  }
  return out;
}

}  // namespace rete
