#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "rete/tkg/dataset.hpp"

namespace rete {

enum class Task { kProduct, kQuery };

std::string_view to_string(Task task);
inline constexpr Task kTasks[] = {Task::kProduct, Task::kQuery};

/// Entities each user interacted with at each step, split by task. Lists are
/// sorted and free of duplicates.
struct GroundTruth {
  struct Targets {
    std::vector<EntityId> products;
    std::vector<EntityId> queries;

    const std::vector<EntityId>& of(Task task) const { return task == Task::kProduct ? products : queries; }
  };

  std::vector<std::map<EntityId, Targets>> steps;

  static GroundTruth from_dataset(const Dataset& data);

  /// Non-empty target list or nullptr.
  const std::vector<EntityId>* find(EntityId user, std::size_t step, Task task) const;
  /// Whether the user has any interaction in steps [begin, end).
  bool active(EntityId user, std::size_t begin, std::size_t end) const;
};

}  // namespace rete
