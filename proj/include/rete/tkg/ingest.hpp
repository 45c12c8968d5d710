#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rete/tkg/types.hpp"

namespace rete {

/// Declared interaction actions and the entity kind each one targets.
/// A `#actions` comment line in the event file (tab or space separated
/// `name:product` / `name:query` tokens) extends this set.
struct ActionTable {
  std::map<std::string, EntityKind, std::less<>> targets;

  /// click, add_cart, follow_click, purchase, review -> Product;
  /// query, search, type_query -> Query.
  static ActionTable defaults();

  /// Parses `click:product,search:query`.
  static ActionTable parse(std::string_view spec);
  std::string to_string() const;
};

/// Reads `user<TAB>target<TAB>action<TAB>timestamp` lines. Dense ids are
/// assigned in order of first appearance; events are sorted by timestamp.
EventLog ingest_events(std::istream& in, const ActionTable& actions,
                       const std::string& source_name = "<stream>");
EventLog ingest_events(const std::filesystem::path& path,
                       const ActionTable& actions);

struct ProductGraphOptions {
  /// When false, lines whose head product is unknown to the log are skipped
  /// instead of registering the product (used after k-core filtering).
  bool register_unknown_heads = true;
};

struct ProductGraphResult {
  std::vector<StaticTriple> triples;
  std::size_t skipped_lines = 0;
};

/// Reads `head<TAB>relation<TAB>tail` lines into `log`'s registries.
/// Tails become attributes unless already registered as queries.
/// Duplicate triples are removed; order of first appearance is kept.
ProductGraphResult ingest_product_graph(std::istream& in, EventLog& log,
                                        const ProductGraphOptions& options = {},
                                        const std::string& source_name = "<stream>");
ProductGraphResult ingest_product_graph(const std::filesystem::path& path,
                                        EventLog& log,
                                        const ProductGraphOptions& options = {});

}  // namespace rete
