#include "rete/model/scoring.hpp"

#include <algorithm>
#include <string>

#include "rete/error.hpp"

namespace rete {

std::vector<EntityId> rank_by_relevance(const Eigen::RowVectorXd& intent, const num::Matrix& x,
                                        std::span<const EntityId> candidates) {
  if (intent.size() != x.cols()) {
    throw Error(ErrorCode::kShape, "rank_by_relevance: intent has " + std::to_string(intent.size()) +
                                       " dims, embeddings " + std::to_string(x.cols()));
  }
  std::vector<std::pair<double, EntityId>> scored;
  scored.reserve(candidates.size());
  for (EntityId c : candidates) {
    if (c.value >= x.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "candidate " + std::to_string(c.value) + " has no embedding");
    }
    scored.emplace_back(intent.dot(x.row(c.value)), c);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<EntityId> out;
  out.reserve(scored.size());
  for (const auto& [_, id] : scored) out.push_back(id);
  return out;
}

}  // namespace rete
