#include "rete/tkg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "rete/error.hpp"
#include "rete/text.hpp"

namespace rete {

namespace fs = std::filesystem;

Dataset Dataset::assemble(EventLog log, std::vector<StaticTriple> triples, std::size_t num_steps,
                          const Split& split, SegmentationRule rule) {
  Dataset data;
  data.segmentation = segment_time(log, num_steps, split, rule);
  data.log = std::move(log);
  data.triples = std::move(triples);
  data.snapshots = build_snapshots(data.log, data.segmentation, data.triples);
  data.adjacency.reserve(data.snapshots.size());
  for (const auto& snap : data.snapshots) data.adjacency.push_back(to_adjacency(snap));
  return data;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "missing '" + path.string() + "'");
  return in;
}

template <class T>
T parse_number(std::string_view text, const fs::path& path, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kFormat, path.string() + ":" + std::to_string(line) +
                                        ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

/// Calls `fn(fields, line_no)` for every non-comment line with exactly `arity` fields.
template <class Fn>
void for_each_record(const fs::path& path, std::size_t arity, Fn&& fn) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_fields(view);
    if (fields.size() != arity) {
      throw Error(ErrorCode::kFormat, path.string() + ":" + std::to_string(line_no) +
                                          ": expected " + std::to_string(arity) + " fields");
    }
    fn(fields, line_no);
  }
}

}  // namespace

void write_registries(const EventLog& log, const fs::path& dir) {
  fs::create_directories(dir);
  auto ents = open_out(dir / "entities.tsv");
  ents << "# id\tname\tkind\n";
  for (std::uint32_t i = 0; i < log.entities.size(); ++i) {
    EntityId id{i};
    ents << i << '\t' << log.entities.name(id) << '\t' << to_string(log.entities.kind(id)) << '\n';
  }
  auto rels = open_out(dir / "relations.tsv");
  rels << "# id\tname\tkind\n";
  for (std::uint32_t i = 0; i < log.relations.size(); ++i) {
    RelationId id{i};
    rels << i << '\t' << log.relations.name(id) << '\t' << to_string(log.relations.kind(id))
         << '\n';
  }
}

void save_dataset(const Dataset& data, const fs::path& dir) {
  write_registries(data.log, dir);
  auto events = open_out(dir / "events.tsv");
  events << "# user\ttarget\trelation\ttimestamp\tstep\n";
  for (const auto& e : data.log.events) {
    events << e.user.value << '\t' << e.target.value << '\t' << e.relation.value << '\t'
           << e.timestamp << '\t' << data.segmentation.step_of(e.timestamp) << '\n';
  }
  auto triples = open_out(dir / "triples.tsv");
  triples << "# head\trelation\ttail\n";
  for (const auto& t : data.triples) {
    triples << t.head.value << '\t' << t.relation.value << '\t' << t.tail.value << '\n';
  }
  auto seg = open_out(dir / "segmentation.tsv");
  seg << "split\t" << data.segmentation.split.to_string() << '\n';
  for (auto b : data.segmentation.boundaries) seg << "boundary\t" << b << '\n';
}

Dataset load_dataset(const fs::path& dir) {
  EventLog log;
  for_each_record(dir / "entities.tsv", 3, [&](const auto& f, std::size_t line) {
    auto id = parse_number<std::uint32_t>(f[0], dir / "entities.tsv", line);
    if (log.entities.intern(f[1], parse_entity_kind(f[2])).value != id) {
      throw Error(ErrorCode::kFormat, "entities.tsv ids are not dense and ordered");
    }
  });
  for_each_record(dir / "relations.tsv", 3, [&](const auto& f, std::size_t line) {
    auto id = parse_number<std::uint32_t>(f[0], dir / "relations.tsv", line);
    if (log.relations.intern(f[1], parse_relation_kind(f[2])).value != id) {
      throw Error(ErrorCode::kFormat, "relations.tsv ids are not dense and ordered");
    }
  });
  const auto n_ent = log.entities.size();
  const auto n_rel = log.relations.size();
  auto check_entity = [&](std::uint32_t v) {
    if (v >= n_ent) throw Error(ErrorCode::kFormat, "entity id " + std::to_string(v) + " out of range");
    return EntityId{v};
  };
  auto check_relation = [&](std::uint32_t v) {
    if (v >= n_rel) throw Error(ErrorCode::kFormat, "relation id " + std::to_string(v) + " out of range");
    return RelationId{v};
  };
  const auto events_path = dir / "events.tsv";
  for_each_record(events_path, 5, [&](const auto& f, std::size_t line) {
    Event e;
    e.user = check_entity(parse_number<std::uint32_t>(f[0], events_path, line));
    e.target = check_entity(parse_number<std::uint32_t>(f[1], events_path, line));
    e.relation = check_relation(parse_number<std::uint32_t>(f[2], events_path, line));
    e.timestamp = parse_number<std::int64_t>(f[3], events_path, line);
    log.events.push_back(e);
  });
  std::vector<StaticTriple> triples;
  const auto triples_path = dir / "triples.tsv";
  for_each_record(triples_path, 3, [&](const auto& f, std::size_t line) {
    StaticTriple t;
    t.head = check_entity(parse_number<std::uint32_t>(f[0], triples_path, line));
    t.relation = check_relation(parse_number<std::uint32_t>(f[1], triples_path, line));
    t.tail = check_entity(parse_number<std::uint32_t>(f[2], triples_path, line));
    triples.push_back(t);
  });

  Dataset data;
  const auto seg_path = dir / "segmentation.tsv";
  for_each_record(seg_path, 2, [&](const auto& f, std::size_t line) {
    if (f[0] == "split") {
      data.segmentation.split = Split::parse(f[1]);
    } else if (f[0] == "boundary") {
      data.segmentation.boundaries.push_back(parse_number<std::int64_t>(f[1], seg_path, line));
    } else {
      throw Error(ErrorCode::kFormat, seg_path.string() + ":" + std::to_string(line) +
                                          ": unknown key '" + std::string(f[0]) + "'");
    }
  });
  auto& b = data.segmentation.boundaries;
  if (b.size() < 2 || !std::is_sorted(b.begin(), b.end()) ||
      std::adjacent_find(b.begin(), b.end()) != b.end()) {
    throw Error(ErrorCode::kFormat, seg_path.string() + ": boundaries must strictly increase");
  }
  data.segmentation.counts.assign(b.size() - 1, 0);
  for (const auto& e : log.events) ++data.segmentation.counts[data.segmentation.step_of(e.timestamp)];

  data.log = std::move(log);
  data.triples = std::move(triples);
  data.snapshots = build_snapshots(data.log, data.segmentation, data.triples);
  for (const auto& snap : data.snapshots) data.adjacency.push_back(to_adjacency(snap));
  return data;
}

}  // namespace rete
