#pragma once

#include <span>

#include "rete/tkg/types.hpp"

namespace rete {

/// |top-k(ranked) ∩ truth| / |truth|. `truth` must be non-empty.
double recall_at_k(std::span<const EntityId> ranked, std::span<const EntityId> truth, std::size_t k);

/// Binary-relevance NDCG with log2 discounts: DCG over the top k divided by
/// the DCG of min(|truth|, k) hits at the top.
double ndcg_at_k(std::span<const EntityId> ranked, std::span<const EntityId> truth, std::size_t k);

}  // namespace rete
