#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rete {

/// Dense integer id with a phantom tag so entity and relation ids cannot be mixed.
template <class Tag>
struct Id {
  std::uint32_t value{};

  constexpr auto operator<=>(const Id&) const = default;
  constexpr std::size_t index() const { return value; }
};

using EntityId = Id<struct EntityTag>;
using RelationId = Id<struct RelationTag>;

enum class EntityKind : std::uint8_t { kUser, kProduct, kQuery, kAttribute };

/// Interaction relations (click, purchase, ...) form the dynamic graph; static
/// relations (has-brand, query-matches-product, ...) form the product graph.
enum class RelationKind : std::uint8_t { kInteraction, kStatic };

std::string_view to_string(EntityKind kind);
std::string_view to_string(RelationKind kind);
EntityKind parse_entity_kind(std::string_view text);
RelationKind parse_relation_kind(std::string_view text);

struct Event {
  EntityId user;
  EntityId target;
  RelationId relation;
  std::int64_t timestamp{};

  bool operator==(const Event&) const = default;
};

struct StaticTriple {
  EntityId head;
  RelationId relation;
  EntityId tail;

  auto operator<=>(const StaticTriple&) const = default;
};

/// Name <-> dense id map for entities. Names are global across kinds, so a name
/// can never denote both a user and a product.
class EntityRegistry {
 public:
  /// Returns the existing id for `name` or registers a new one with `kind`.
  /// Throws if `name` is already registered with a different kind.
  EntityId intern(std::string_view name, EntityKind kind);

  const EntityId* find(std::string_view name) const;

  std::size_t size() const { return names_.size(); }
  const std::string& name(EntityId id) const { return names_[id.index()]; }
  EntityKind kind(EntityId id) const { return kinds_[id.index()]; }

  std::vector<EntityId> of_kind(EntityKind kind) const;
  std::size_t count(EntityKind kind) const;

  bool operator==(const EntityRegistry& other) const {
    return names_ == other.names_ && kinds_ == other.kinds_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<EntityKind> kinds_;
  std::unordered_map<std::string, EntityId> index_;
};

/// Relation registry. Interaction relations additionally record whether they
/// target products or queries.
class RelationRegistry {
 public:
  RelationId intern(std::string_view name, RelationKind kind);
  const RelationId* find(std::string_view name) const;

  std::size_t size() const { return names_.size(); }
  const std::string& name(RelationId id) const { return names_[id.index()]; }
  RelationKind kind(RelationId id) const { return kinds_[id.index()]; }

  std::vector<RelationId> of_kind(RelationKind kind) const;

  bool operator==(const RelationRegistry& other) const {
    return names_ == other.names_ && kinds_ == other.kinds_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<RelationKind> kinds_;
  std::unordered_map<std::string, RelationId> index_;
};

/// Timestamped interaction events plus the registries their ids resolve in.
/// Events are kept sorted by timestamp (stable with respect to input order).
struct EventLog {
  std::vector<Event> events;
  EntityRegistry entities;
  RelationRegistry relations;
};

}  // namespace rete

template <class Tag>
struct std::hash<rete::Id<Tag>> {
  std::size_t operator()(const rete::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
