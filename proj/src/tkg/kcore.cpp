#include "rete/tkg/kcore.hpp"

#include "rete/error.hpp"

namespace rete {

EventLog k_core_filter(const EventLog& log, std::size_t min_interactions) {
  if (min_interactions == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k-core threshold must be >= 1");
  }
  const std::size_t n = log.entities.size();
  std::vector<bool> alive_event(log.events.size(), true);
  std::vector<bool> alive_entity(n, true);
  std::vector<std::size_t> count(n, 0);
  for (const auto& e : log.events) {
    ++count[e.user.index()];
    ++count[e.target.index()];
  }

  auto filterable = [&](std::size_t i) {
    return log.entities.kind(EntityId{static_cast<std::uint32_t>(i)}) != EntityKind::kAttribute;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (alive_entity[i] && filterable(i) && count[i] < min_interactions) {
        alive_entity[i] = false;
        changed = true;
      }
    }
    if (!changed) break;
    for (std::size_t k = 0; k < log.events.size(); ++k) {
      if (!alive_event[k]) continue;
      const auto& e = log.events[k];
      if (!alive_entity[e.user.index()] || !alive_entity[e.target.index()]) {
        alive_event[k] = false;
        --count[e.user.index()];
        --count[e.target.index()];
      }
    }
  }

  EventLog out;
  out.relations = log.relations;
  std::vector<EntityId> remap(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!alive_entity[i]) continue;
    EntityId old{i};
    remap[i] = out.entities.intern(log.entities.name(old), log.entities.kind(old));
  }
  for (std::size_t k = 0; k < log.events.size(); ++k) {
    if (!alive_event[k]) continue;
    Event e = log.events[k];
    e.user = remap[e.user.index()];
    e.target = remap[e.target.index()];
    out.events.push_back(e);
  }
  return out;
}

}  // namespace rete
