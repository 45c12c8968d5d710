#include "rete/tkg/types.hpp"

#include "rete/error.hpp"

namespace rete {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kMissingArtifact: return "missing-artifact";
  }
  return "unknown";
}

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kUser: return "user";
    case EntityKind::kProduct: return "product";
    case EntityKind::kQuery: return "query";
    case EntityKind::kAttribute: return "attribute";
  }
  return "unknown";
}

std::string_view to_string(RelationKind kind) {
  return kind == RelationKind::kInteraction ? "interaction" : "static";
}

EntityKind parse_entity_kind(std::string_view text) {
  if (text == "user") return EntityKind::kUser;
  if (text == "product") return EntityKind::kProduct;
  if (text == "query") return EntityKind::kQuery;
  if (text == "attribute") return EntityKind::kAttribute;
  throw Error(ErrorCode::kFormat, "unknown entity kind '" + std::string(text) + "'");
}

RelationKind parse_relation_kind(std::string_view text) {
  if (text == "interaction") return RelationKind::kInteraction;
  if (text == "static") return RelationKind::kStatic;
  throw Error(ErrorCode::kFormat, "unknown relation kind '" + std::string(text) + "'");
}

EntityId EntityRegistry::intern(std::string_view name, EntityKind kind) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    if (kinds_[it->second.index()] != kind) {
      throw Error(ErrorCode::kFormat,
                  "entity '" + std::string(name) + "' is a " +
                      std::string(to_string(kinds_[it->second.index()])) +
                      ", not a " + std::string(to_string(kind)));
    }
    return it->second;
  }
  EntityId id{static_cast<std::uint32_t>(names_.size())};
  names_.emplace_back(name);
  kinds_.push_back(kind);
  index_.emplace(names_.back(), id);
  return id;
}

const EntityId* EntityRegistry::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &it->second;
}

std::vector<EntityId> EntityRegistry::of_kind(EntityKind kind) const {
  std::vector<EntityId> out;
  for (std::uint32_t i = 0; i < kinds_.size(); ++i) {
    if (kinds_[i] == kind) out.push_back(EntityId{i});
  }
  return out;
}

std::size_t EntityRegistry::count(EntityKind kind) const {
  std::size_t n = 0;
  for (auto k : kinds_) n += (k == kind);
  return n;
}

RelationId RelationRegistry::intern(std::string_view name, RelationKind kind) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    if (kinds_[it->second.index()] != kind) {
      throw Error(ErrorCode::kFormat,
                  "relation '" + std::string(name) + "' is already an " +
                      std::string(to_string(kinds_[it->second.index()])) +
                      " relation");
    }
    return it->second;
  }
  RelationId id{static_cast<std::uint32_t>(names_.size())};
  names_.emplace_back(name);
  kinds_.push_back(kind);
  index_.emplace(names_.back(), id);
  return id;
}

const RelationId* RelationRegistry::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &it->second;
}

std::vector<RelationId> RelationRegistry::of_kind(RelationKind kind) const {
  std::vector<RelationId> out;
  for (std::uint32_t i = 0; i < kinds_.size(); ++i) {
    if (kinds_[i] == kind) out.push_back(RelationId{i});
  }
  return out;
}

}  // namespace rete
