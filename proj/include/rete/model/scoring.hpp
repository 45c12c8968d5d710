#pragma once

#include <span>
#include <vector>

#include "rete/num/parameters.hpp"
#include "rete/tkg/types.hpp"

namespace rete {

/// Candidates sorted by <intent, X_c> descending, ties by ascending id.
std::vector<EntityId> rank_by_relevance(const Eigen::RowVectorXd& intent, const num::Matrix& x,
                                        std::span<const EntityId> candidates);

}  // namespace rete
