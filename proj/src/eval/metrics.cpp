#include "rete/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rete/error.hpp"

namespace rete {

namespace {

std::unordered_set<EntityId> truth_set(std::span<const EntityId> truth, const char* metric) {
  if (truth.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(metric) + ": empty ground truth");
  return {truth.begin(), truth.end()};
}

}  // namespace

double recall_at_k(std::span<const EntityId> ranked, std::span<const EntityId> truth, std::size_t k) {
  const auto relevant = truth_set(truth, "recall_at_k");
  const std::size_t n = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) hits += relevant.count(ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

double ndcg_at_k(std::span<const EntityId> ranked, std::span<const EntityId> truth, std::size_t k) {
  const auto relevant = truth_set(truth, "ndcg_at_k");
  const std::size_t n = std::min(k, ranked.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.count(ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(relevant.size(), k); ++i) {
    ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

}  // namespace rete
