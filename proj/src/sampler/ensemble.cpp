#include "rete/sampler/ensemble.hpp"

#include <algorithm>
#include <fstream>

#include "rete/binary_io.hpp"
#include "rete/error.hpp"
#include "rete/seed.hpp"
#include "rete/text.hpp"

namespace rete {

EnsembleConfig EnsembleConfig::defaults() {
  EnsembleConfig cfg;
  cfg.samplers.emplace_back(PprConfig{});
  cfg.samplers.emplace_back(KhopConfig{});
  return cfg;
}

EnsembleConfig EnsembleConfig::parse(std::string_view text) {
  EnsembleConfig cfg;
  for (auto item : split_any(text, "; ")) {
    auto parts = split_any(item, ":");
    auto kind = parts.front();
    auto for_each_kv = [&](auto&& assign) {
      for (std::size_t i = 1; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string_view::npos) {
          throw Error(ErrorCode::kConfig, "sampler option '" + std::string(parts[i]) + "' needs key=value");
        }
        auto key = parts[i].substr(0, eq);
        auto value = parts[i].substr(eq + 1);
        if (!assign(key, value)) {
          throw Error(ErrorCode::kConfig, "unknown " + std::string(kind) + " option '" +
                                              std::string(key) + "'");
        }
      }
    };
    if (kind == "ppr") {
      PprConfig ppr;
      for_each_kv([&](std::string_view key, std::string_view value) {
        if (key == "alpha") ppr.alpha = parse_number<double>(value, "ppr alpha");
        else if (key == "eps") ppr.eps = parse_number<double>(value, "ppr eps");
        else if (key == "budget") ppr.budget = parse_number<std::size_t>(value, "ppr budget");
        else if (key == "theta") ppr.theta = parse_number<double>(value, "ppr theta");
        else if (key == "keep_disconnected") ppr.keep_disconnected = parse_number<int>(value, "ppr keep_disconnected") != 0;
        else return false;
        return true;
      });
      if (!(ppr.alpha > 0 && ppr.alpha < 1) || ppr.budget == 0 || ppr.theta < 0) {
        throw Error(ErrorCode::kConfig, "ppr sampler needs 0 < alpha < 1, budget >= 1, theta >= 0");
      }
      cfg.samplers.emplace_back(ppr);
    } else if (kind == "khop") {
      KhopConfig khop;
      for_each_kv([&](std::string_view key, std::string_view value) {
        if (key == "k") khop.k = parse_number<std::size_t>(value, "khop k");
        else if (key == "budget") khop.budget = parse_number<std::size_t>(value, "khop budget");
        else if (key == "seed") khop.seed = parse_number<std::uint64_t>(value, "khop seed");
        else return false;
        return true;
      });
      if (khop.k == 0 || khop.budget == 0) {
        throw Error(ErrorCode::kConfig, "khop sampler needs k >= 1 and budget >= 1");
      }
      cfg.samplers.emplace_back(khop);
    } else {
      throw Error(ErrorCode::kConfig, "unknown sampler '" + std::string(kind) + "'");
    }
  }
  if (cfg.samplers.empty()) throw Error(ErrorCode::kConfig, "sampler ensemble is empty");
  return cfg;
}

std::string EnsembleConfig::to_string() const {
  std::string out;
  for (const auto& spec : samplers) {
    if (!out.empty()) out += ';';
    if (const auto* ppr = std::get_if<PprConfig>(&spec)) {
      out += "ppr:alpha=" + format_double(ppr->alpha) + ":eps=" + format_double(ppr->eps) +
             ":budget=" + std::to_string(ppr->budget) + ":theta=" + format_double(ppr->theta) +
             ":keep_disconnected=" + (ppr->keep_disconnected ? "1" : "0");
    } else {
      const auto& khop = std::get<KhopConfig>(spec);
      out += "khop:k=" + std::to_string(khop.k) + ":budget=" + std::to_string(khop.budget) +
             ":seed=" + std::to_string(khop.seed);
    }
  }
  return out;
}

std::vector<Subgraph> ensemble_sample(const AdjacencyIndex& adj, EntityId user,
                                      const EnsembleConfig& cfg, std::uint64_t salt) {
  if (cfg.samplers.empty()) throw Error(ErrorCode::kInvalidArgument, "sampler ensemble is empty");
  std::vector<Subgraph> out;
  out.reserve(cfg.size());
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    if (const auto* ppr = std::get_if<PprConfig>(&cfg.samplers[i])) {
      out.push_back(ppr_subgraph(adj, user, *ppr));
    } else {
      KhopConfig khop = std::get<KhopConfig>(cfg.samplers[i]);
      khop.seed = derive_seed(khop.seed, "khop", i, user.value, salt);
      out.push_back(khop_subgraph(adj, user, khop));
    }
  }
  return out;
}

void SubgraphCache::put(EntityId user, std::size_t step, std::vector<Subgraph> subgraphs) {
  if (step >= num_steps_ || subgraphs.size() != ensemble_size_) {
    throw Error(ErrorCode::kInvalidArgument, "subgraph cache record does not match its shape");
  }
  records_[{user.value, step}] = std::move(subgraphs);
}

const std::vector<Subgraph>& SubgraphCache::at(EntityId user, std::size_t step) const {
  auto it = records_.find({user.value, step});
  if (it == records_.end()) {
    throw Error(ErrorCode::kMissingArtifact, "no cached subgraphs for user " +
                                                 std::to_string(user.value) + " at step " +
                                                 std::to_string(step));
  }
  return it->second;
}

bool SubgraphCache::contains(EntityId user, std::size_t step) const {
  return records_.contains({user.value, step});
}

std::vector<EntityId> SubgraphCache::users() const {
  std::vector<EntityId> out;
  for (const auto& [key, _] : records_) {
    if (out.empty() || out.back().value != key.first) out.push_back(EntityId{key.first});
  }
  return out;
}

namespace {

constexpr char kCacheMagic[8] = {'R', 'E', 'T', 'E', 'S', 'G', 'C', '1'};
constexpr std::uint32_t kCacheVersion = 1;

}  // namespace

void SubgraphCache::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(kCacheMagic, sizeof kCacheMagic);
  put_le<std::uint32_t>(out, kCacheVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(num_steps_));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble_size_));
  put_le<std::uint64_t>(out, records_.size() * ensemble_size_);
  for (const auto& [key, subs] : records_) {
    for (std::uint32_t i = 0; i < subs.size(); ++i) {
      const auto& sub = subs[i];
      put_le<std::uint32_t>(out, key.first);
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(key.second));
      put_le<std::uint32_t>(out, i);
      put_le<std::uint8_t>(out, static_cast<std::uint8_t>(sub.source));
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sub.entities.size()));
      for (auto e : sub.entities) put_le<std::uint32_t>(out, e.value);
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sub.edges.size()));
      for (auto [a, b] : sub.edges) {
        put_le<std::uint32_t>(out, a);
        put_le<std::uint32_t>(out, b);
      }
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

SubgraphCache SubgraphCache::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "missing '" + path.string() + "'");
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kCacheMagic)) {
    throw Error(ErrorCode::kFormat, "'" + path.string() + "' is not a subgraph cache");
  }
  if (auto version = get_le<std::uint32_t>(in); version != kCacheVersion) {
    throw Error(ErrorCode::kFormat, "unsupported subgraph cache version " + std::to_string(version));
  }
  const auto num_steps = get_le<std::uint32_t>(in);
  const auto ensemble_size = get_le<std::uint32_t>(in);
  SubgraphCache cache(num_steps, ensemble_size);
  const auto count = get_le<std::uint64_t>(in);
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<Subgraph>> pending;
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto user = get_le<std::uint32_t>(in);
    const auto step = get_le<std::uint32_t>(in);
    const auto index = get_le<std::uint32_t>(in);
    Subgraph sub;
    sub.center = EntityId{user};
    sub.source = static_cast<SamplerKind>(get_le<std::uint8_t>(in));
    sub.entities.resize(get_le<std::uint32_t>(in));
    for (auto& e : sub.entities) e = EntityId{get_le<std::uint32_t>(in)};
    sub.edges.resize(get_le<std::uint32_t>(in));
    for (auto& [a, b] : sub.edges) {
      a = get_le<std::uint32_t>(in);
      b = get_le<std::uint32_t>(in);
      if (a >= sub.entities.size() || b >= sub.entities.size()) {
        throw Error(ErrorCode::kFormat, "subgraph cache edge out of range");
      }
    }
    auto& slot = pending[{user, step}];
    if (slot.size() != index) throw Error(ErrorCode::kFormat, "subgraph cache records out of order");
    slot.push_back(std::move(sub));
  }
  for (auto& [key, subs] : pending) cache.put(EntityId{key.first}, key.second, std::move(subs));
  return cache;
}

SubgraphCache sample_all(const Dataset& data, const EnsembleConfig& cfg, std::uint64_t root_seed) {
  SubgraphCache cache(data.num_steps(), cfg.size());
  const auto users = data.entities().of_kind(EntityKind::kUser);
  for (std::size_t step = 0; step < data.num_steps(); ++step) {
    const auto& adj = data.adjacency[step];
    for (EntityId user : users) {
      if (adj.degree(user) == 0) {
        cache.put(user, step, std::vector<Subgraph>(cfg.size(), singleton_subgraph(user)));
      } else {
        cache.put(user, step,
                  ensemble_sample(adj, user, cfg, derive_seed(root_seed, "sample", step)));
      }
    }
  }
  return cache;
}

}  // namespace rete
