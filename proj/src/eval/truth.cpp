#include "rete/eval/truth.hpp"

#include <algorithm>

namespace rete {

std::string_view to_string(Task task) { return task == Task::kProduct ? "product" : "query"; }

GroundTruth GroundTruth::from_dataset(const Dataset& data) {
  GroundTruth truth;
  truth.steps.resize(data.num_steps());
  for (const SnapshotGraph& snap : data.snapshots) {
    auto& users = truth.steps[snap.step];
    for (const Event& e : snap.interactions) {
      const EntityKind kind = data.entities().kind(e.target);
      if (kind == EntityKind::kProduct) users[e.user].products.push_back(e.target);
      else if (kind == EntityKind::kQuery) users[e.user].queries.push_back(e.target);
    }
    for (auto& [_, t] : users) {
      for (auto* list : {&t.products, &t.queries}) {
        std::sort(list->begin(), list->end());
        list->erase(std::unique(list->begin(), list->end()), list->end());
      }
    }
  }
  return truth;
}

const std::vector<EntityId>* GroundTruth::find(EntityId user, std::size_t step, Task task) const {
  if (step >= steps.size()) return nullptr;
  auto it = steps[step].find(user);
  if (it == steps[step].end()) return nullptr;
  const auto& list = it->second.of(task);
  return list.empty() ? nullptr : &list;
}

bool GroundTruth::active(EntityId user, std::size_t begin, std::size_t end) const {
  for (std::size_t t = begin; t < std::min(end, steps.size()); ++t) {
    if (steps[t].count(user)) return true;
  }
  return false;
}

}  // namespace rete
