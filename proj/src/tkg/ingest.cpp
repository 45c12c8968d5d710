#include "rete/tkg/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "rete/error.hpp"
#include "rete/text.hpp"

namespace rete {

ActionTable ActionTable::defaults() {
  ActionTable table;
  for (const char* name : {"click", "add_cart", "follow_click", "purchase", "review"}) {
    table.targets.emplace(name, EntityKind::kProduct);
  }
  for (const char* name : {"query", "search", "type_query"}) {
    table.targets.emplace(name, EntityKind::kQuery);
  }
  return table;
}

namespace {

void add_action_token(ActionTable& table, std::string_view token) {
  auto colon = token.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kFormat,
                "action declaration '" + std::string(token) + "' must be name:product or name:query");
  }
  auto name = token.substr(0, colon);
  auto kind = parse_entity_kind(token.substr(colon + 1));
  if (kind != EntityKind::kProduct && kind != EntityKind::kQuery) {
    throw Error(ErrorCode::kFormat,
                "action '" + std::string(name) + "' must target product or query");
  }
  table.targets[std::string(name)] = kind;
}

}  // namespace

ActionTable ActionTable::parse(std::string_view spec) {
  ActionTable table;
  for (auto token : split_any(spec, ", \t")) add_action_token(table, token);
  return table;
}

std::string ActionTable::to_string() const {
  std::string out;
  for (const auto& [name, kind] : targets) {
    if (!out.empty()) out += ',';
    out += name;
    out += ':';
    out += rete::to_string(kind);
  }
  return out;
}

EventLog ingest_events(std::istream& in, const ActionTable& declared,
                       const std::string& source_name) {
  ActionTable actions = declared;
  EventLog log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      view.remove_prefix(1);
      view = trim(view);
      if (view.starts_with("actions")) {
        auto rest = view.substr(7);
        if (!rest.empty() && rest.front() == ':') rest.remove_prefix(1);
        for (auto token : split_any(rest, ", \t")) add_action_token(actions, token);
      }
      continue;
    }
    auto fields = split_fields(view);
    auto where = [&] { return source_name + ":" + std::to_string(line_no) + ": "; };
    if (fields.size() != 4) {
      throw Error(ErrorCode::kFormat,
                  where() + "expected 4 fields (user, target, action, timestamp), got " +
                      std::to_string(fields.size()));
    }
    auto action = actions.targets.find(fields[2]);
    if (action == actions.targets.end()) {
      throw Error(ErrorCode::kFormat, where() + "unknown action '" + std::string(fields[2]) + "'");
    }
    std::int64_t ts = 0;
    auto [ptr, ec] = std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(), ts);
    if (ec != std::errc{} || ptr != fields[3].data() + fields[3].size()) {
      throw Error(ErrorCode::kFormat,
                  where() + "non-numeric timestamp '" + std::string(fields[3]) + "'");
    }
    if (ts < 0) throw Error(ErrorCode::kFormat, where() + "negative timestamp");
    try {
      Event e;
      e.user = log.entities.intern(fields[0], EntityKind::kUser);
      e.target = log.entities.intern(fields[1], action->second);
      e.relation = log.relations.intern(fields[2], RelationKind::kInteraction);
      e.timestamp = ts;
      log.events.push_back(e);
    } catch (const Error& err) {
      throw Error(err.code(), where() + err.what());
    }
  }
  std::stable_sort(log.events.begin(), log.events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  return log;
}

EventLog ingest_events(const std::filesystem::path& path, const ActionTable& actions) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open events file '" + path.string() + "'");
  return ingest_events(in, actions, path.string());
}

ProductGraphResult ingest_product_graph(std::istream& in, EventLog& log,
                                        const ProductGraphOptions& options,
                                        const std::string& source_name) {
  ProductGraphResult result;
  std::set<StaticTriple> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_fields(view);
    auto where = [&] { return source_name + ":" + std::to_string(line_no) + ": "; };
    if (fields.size() != 3) {
      throw Error(ErrorCode::kFormat,
                  where() + "expected 3 fields (head, relation, tail), got " +
                      std::to_string(fields.size()));
    }
    try {
      const EntityId* known_head = log.entities.find(fields[0]);
      if (known_head == nullptr && !options.register_unknown_heads) {
        ++result.skipped_lines;
        continue;
      }
      if (known_head != nullptr && log.entities.kind(*known_head) != EntityKind::kProduct) {
        throw Error(ErrorCode::kFormat,
                    "head '" + std::string(fields[0]) + "' is a " +
                        std::string(to_string(log.entities.kind(*known_head))) +
                        ", expected a product");
      }
      StaticTriple triple;
      triple.head = log.entities.intern(fields[0], EntityKind::kProduct);
      triple.relation = log.relations.intern(fields[1], RelationKind::kStatic);
      const EntityId* known_tail = log.entities.find(fields[2]);
      if (known_tail != nullptr) {
        auto kind = log.entities.kind(*known_tail);
        if (kind != EntityKind::kQuery && kind != EntityKind::kAttribute) {
          throw Error(ErrorCode::kFormat,
                      "tail '" + std::string(fields[2]) + "' is a " +
                          std::string(to_string(kind)) + ", expected a query or attribute");
        }
        triple.tail = *known_tail;
      } else {
        triple.tail = log.entities.intern(fields[2], EntityKind::kAttribute);
      }
      if (seen.insert(triple).second) result.triples.push_back(triple);
    } catch (const Error& err) {
      throw Error(err.code(), where() + err.what());
    }
  }
  return result;
}

ProductGraphResult ingest_product_graph(const std::filesystem::path& path, EventLog& log,
                                        const ProductGraphOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open triples file '" + path.string() + "'");
  return ingest_product_graph(in, log, options, path.string());
}

}  // namespace rete
