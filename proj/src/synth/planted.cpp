#include "rete/synth/planted.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "rete/error.hpp"
#include "rete/seed.hpp"

namespace rete {

PlantedConfig PlantedConfig::drift() {
  PlantedConfig cfg;
  cfg.redraw_every = 3;
  cfg.switch_probability = 0.5;
  cfg.flip_step = cfg.split.validation_end() + 2;
  return cfg;
}

namespace {

std::vector<std::size_t> members(std::size_t count, std::size_t clusters, std::size_t c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (i * clusters / count == c) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> choose(const std::vector<std::size_t>& pool, std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> out = pool;
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(std::min(n, out.size()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PlantedData generate_planted(const PlantedConfig& cfg) {
  if (cfg.clusters == 0 || cfg.users < cfg.clusters || cfg.products < cfg.clusters ||
      cfg.queries < cfg.clusters) {
    throw Error(ErrorCode::kConfig, "planted generator needs at least one entity of each kind per cluster");
  }
  if (cfg.steps != cfg.split.total()) throw Error(ErrorCode::kConfig, "planted steps must equal the split total");

  PlantedData out;
  EventLog& log = out.log;
  std::vector<EntityId> users, products, queries, cluster_attr, brand_attr;
  for (std::size_t i = 0; i < cfg.users; ++i) users.push_back(log.entities.intern("u" + std::to_string(i), EntityKind::kUser));
  for (std::size_t i = 0; i < cfg.products; ++i) products.push_back(log.entities.intern("p" + std::to_string(i), EntityKind::kProduct));
  for (std::size_t i = 0; i < cfg.queries; ++i) queries.push_back(log.entities.intern("q" + std::to_string(i), EntityKind::kQuery));
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    cluster_attr.push_back(log.entities.intern("category" + std::to_string(c), EntityKind::kAttribute));
  }
  const RelationId click = log.relations.intern("click", RelationKind::kInteraction);
  const RelationId search = log.relations.intern("search", RelationKind::kInteraction);
  const RelationId in_category = log.relations.intern("in_category", RelationKind::kStatic);
  const RelationId has_brand = log.relations.intern("has_brand", RelationKind::kStatic);
  const RelationId matched_by = log.relations.intern("matched_by", RelationKind::kStatic);

  std::vector<std::vector<std::size_t>> cluster_products(cfg.clusters), cluster_queries(cfg.clusters);
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    cluster_products[c] = members(cfg.products, cfg.clusters, c);
    cluster_queries[c] = members(cfg.queries, cfg.clusters, c);
  }

  // Product graph: category, a brand shared by three consecutive products of
  // a cluster, and the cluster query matching each product.
  for (std::size_t c = 0; c < cfg.clusters; ++c) {
    const auto& ps = cluster_products[c];
    const auto& qs = cluster_queries[c];
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const EntityId p = products[ps[k]];
      out.triples.push_back({p, in_category, cluster_attr[c]});
      const std::string brand = "brand" + std::to_string(c) + "_" + std::to_string(k / 3);
      out.triples.push_back({p, has_brand, log.entities.intern(brand, EntityKind::kAttribute)});
      out.triples.push_back({p, matched_by, queries[qs[k % qs.size()]]});
    }
  }

  std::mt19937_64 rng(derive_seed(cfg.seed, "planted"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  out.user_cluster.resize(cfg.users);
  std::vector<std::vector<std::size_t>> fav_p(cfg.users), fav_q(cfg.users);
  std::vector<std::size_t> current(cfg.users);
  for (std::size_t u = 0; u < cfg.users; ++u) {
    out.user_cluster[u] = u % cfg.clusters;
    current[u] = out.user_cluster[u];
    fav_p[u] = choose(cluster_products[current[u]], cfg.favourite_products, rng);
    fav_q[u] = choose(cluster_queries[current[u]], cfg.favourite_queries, rng);
  }

  std::int64_t clock = 0;
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    for (std::size_t u = 0; u < cfg.users; ++u) {
      const bool flip = cfg.flip_step && t == *cfg.flip_step;
      const bool redraw = cfg.redraw_every > 0 && t > 0 && t % cfg.redraw_every == 0;
      if (flip) {
        current[u] = (current[u] + 1) % cfg.clusters;
      } else if (redraw && cfg.clusters > 1 && unit(rng) < cfg.switch_probability) {
        current[u] = (current[u] + 1 + static_cast<std::size_t>(unit(rng) * 1e9) % (cfg.clusters - 1)) % cfg.clusters;
      }
      if (flip || redraw) {
        fav_p[u] = choose(cluster_products[current[u]], cfg.favourite_products, rng);
        fav_q[u] = choose(cluster_queries[current[u]], cfg.favourite_queries, rng);
      }
      auto emit = [&](EntityId target, RelationId rel) {
        log.events.push_back({users[u], target, rel, clock++});
      };
      for (std::size_t p : fav_p[u]) emit(products[p], click);
      std::vector<std::size_t> others;
      for (std::size_t p : cluster_products[current[u]]) {
        if (!std::binary_search(fav_p[u].begin(), fav_p[u].end(), p)) others.push_back(p);
      }
      const double roll = unit(rng);
      const std::size_t pick = static_cast<std::size_t>(unit(rng) * 1e9);
      if (roll < cfg.noise && !others.empty()) emit(products[others[pick % others.size()]], click);
      else emit(products[fav_p[u][pick % fav_p[u].size()]], click);
      for (std::size_t q : fav_q[u]) emit(queries[q], search);
    }
  }
  return out;
}

Dataset planted_dataset(const PlantedConfig& cfg) {
  PlantedData d = generate_planted(cfg);
  return Dataset::assemble(std::move(d.log), std::move(d.triples), cfg.steps, cfg.split);
}

void write_planted(const PlantedData& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream events(dir / "events.tsv");
  std::ofstream graph(dir / "product_graph.tsv");
  if (!events || !graph) throw Error(ErrorCode::kIo, "cannot write into '" + dir.string() + "'");
  const auto& ents = data.log.entities;
  const auto& rels = data.log.relations;
  events << "# actions: click:product search:query\n";
  for (const Event& e : data.log.events) {
    events << ents.name(e.user) << '\t' << ents.name(e.target) << '\t' << rels.name(e.relation) << '\t'
           << e.timestamp << '\n';
  }
  for (const StaticTriple& t : data.triples) {
    graph << ents.name(t.head) << '\t' << rels.name(t.relation) << '\t' << ents.name(t.tail) << '\n';
  }
}

}  // namespace rete
