#include "rete/cli/commands.hpp"

#include <fstream>
#include <ostream>

#include "rete/error.hpp"
#include "rete/model/encoder.hpp"
#include "rete/num/parameters.hpp"
#include "rete/synth/planted.hpp"
#include "rete/text.hpp"
#include "rete/tkg/ingest.hpp"
#include "rete/tkg/kcore.hpp"

namespace rete {

namespace fs = std::filesystem;

fs::path RunPaths::report(EvalMode mode, std::string_view split) const {
  return root / ("report_" + std::string(to_string(mode)) + "_" + std::string(split) + ".json");
}

fs::path RunPaths::scores(EvalMode mode, std::string_view split) const {
  return root / ("scores_" + std::string(to_string(mode)) + "_" + std::string(split) + ".csv");
}

fs::path RunPaths::attention(std::string_view user) const {
  return root / ("attention_" + std::string(user) + ".csv");
}

namespace {

void require(const fs::path& path, std::string_view command) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kMissingArtifact,
                "'" + path.string() + "' not found; run `rete " + std::string(command) + "` first");
  }
}

Dataset load_run_dataset(const RunPaths& paths) {
  require(paths.dataset() / "segmentation.tsv", "ingest");
  return load_dataset(paths.dataset());
}

SubgraphCache load_run_cache(const RunPaths& paths, const RunConfig& cfg) {
  require(paths.subgraphs(), "sample");
  SubgraphCache cache = SubgraphCache::load(paths.subgraphs());
  if (cache.ensemble_size() != cfg.ensemble.size()) {
    throw Error(ErrorCode::kMissingArtifact, "subgraph cache holds " + std::to_string(cache.ensemble_size()) +
                                                 " samplers but the config has " +
                                                 std::to_string(cfg.ensemble.size()) + "; rerun `rete sample`");
  }
  return cache;
}

num::ParameterStore load_run_model(const RunPaths& paths) {
  require(paths.checkpoint(), "train");
  return num::load_parameters(paths.checkpoint());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

IngestSummary cmd_ingest(const RunConfig& cfg, std::ostream& log) {
  if (!fs::exists(cfg.events)) throw Error(ErrorCode::kIo, "events file '" + cfg.events.string() + "' not found");
  if (!fs::exists(cfg.product_graph)) {
    throw Error(ErrorCode::kIo, "product graph '" + cfg.product_graph.string() + "' not found");
  }
  ActionTable actions = ActionTable::defaults();
  if (!cfg.actions.empty()) {
    for (const auto& [name, kind] : ActionTable::parse(cfg.actions).targets) actions.targets[name] = kind;
  }
  EventLog raw = ingest_events(cfg.events, actions);
  EventLog log_filtered = k_core_filter(raw, cfg.kcore);
  ProductGraphOptions options;
  options.register_unknown_heads = false;
  ProductGraphResult graph = ingest_product_graph(cfg.product_graph, log_filtered, options);
  Dataset data = Dataset::assemble(std::move(log_filtered), std::move(graph.triples), cfg.steps, cfg.split,
                                   cfg.segmentation);

  const RunPaths paths{cfg.out};
  fs::create_directories(paths.dataset());
  save_dataset(data, paths.dataset());
  write_text(paths.config(), cfg.to_string());

  IngestSummary s;
  s.users = data.entities().count(EntityKind::kUser);
  s.products = data.entities().count(EntityKind::kProduct);
  s.queries = data.entities().count(EntityKind::kQuery);
  s.entities = data.entities().size();
  for (const Event& e : data.log.events) {
    if (data.entities().kind(e.target) == EntityKind::kProduct) ++s.product_interactions;
    else ++s.query_interactions;
  }
  s.static_triples = data.triples.size();
  s.triplets = data.log.events.size() + data.triples.size();
  log << "#User\t" << s.users << "\n#Product\t" << s.products << "\n#Query\t" << s.queries
      << "\nProduct interactions\t" << s.product_interactions << "\nQuery interactions\t"
      << s.query_interactions << "\n#Entity\t" << s.entities << "\n#Triplet\t" << s.triplets
      << "\n#Time step\t" << data.num_steps() << "\n";
  if (graph.skipped_lines > 0) log << "skipped product-graph lines\t" << graph.skipped_lines << "\n";
  return s;
}

void cmd_sample(const RunConfig& cfg, std::ostream& log) {
  const RunPaths paths{cfg.out};
  const Dataset data = load_run_dataset(paths);
  const SubgraphCache cache = sample_all(data, cfg.ensemble, cfg.seed);
  cache.save(paths.subgraphs());
  log << "sampled " << cache.users().size() << " users x " << cache.num_steps() << " steps x "
      << cache.ensemble_size() << " samplers -> " << paths.subgraphs().string() << "\n";
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  const RunPaths paths{cfg.out};
  const Dataset data = load_run_dataset(paths);
  const SubgraphCache cache = load_run_cache(paths, cfg);
  const ModelConfig model = cfg.model_config();
  const TrainConfig train_cfg = cfg.train_config();

  num::ParameterStore params = initialize_parameters(data, model, cfg.seed);
  const std::vector<double> pre = pretrain_background(data, params, train_cfg.pretrain, cfg.seed);
  {
    std::ofstream out(paths.pretrain_history());
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + paths.pretrain_history().string() + "'");
    out << "epoch,L_KGC\n";
    for (std::size_t i = 0; i < pre.size(); ++i) out << i + 1 << ',' << format_double(pre[i]) << '\n';
  }
  const TrainResult result = train(data, cache, model, train_cfg, params);
  write_loss_history(result.history, paths.loss_history());
  num::save_parameters(params, paths.checkpoint());
  log << "trained " << result.history.size() << " epochs; best epoch " << result.best_epoch
      << " with validation product Recall@" << train_cfg.optim.select_k << " "
      << format_double(result.best_val_recall) << "\n";
}

void cmd_eval(const RunConfig& cfg, std::ostream& log) {
  const RunPaths paths{cfg.out};
  const Dataset data = load_run_dataset(paths);
  const SubgraphCache cache = load_run_cache(paths, cfg);
  num::ParameterStore params = load_run_model(paths);
  const Split& split = data.segmentation.split;

  EvalOptions opts;
  opts.begin = cfg.eval_split == "validation" ? split.train_end() : split.validation_end();
  opts.end = cfg.eval_split == "validation" ? split.validation_end() : split.total();
  opts.k = cfg.k;
  opts.mode = cfg.eval_mode;
  opts.keep_user_scores = true;
  const MetricsReport report =
      evaluate(params, cfg.model_config(), data, cache, GroundTruth::from_dataset(data), opts);
  report.write_json(paths.report(cfg.eval_mode, cfg.eval_split));
  report.write_user_scores(paths.scores(cfg.eval_mode, cfg.eval_split));
  for (Task task : kTasks) {
    const TaskSummary& s = report.summary(task);
    log << to_string(task) << "\tRecall@" << cfg.k << " " << format_double(s.recall) << "\tNDCG@" << cfg.k
        << " " << format_double(s.ndcg) << "\tpairs " << s.n_pairs << "\n";
  }
  log << "skipped users\t" << report.skipped_users << "\n";
}

std::size_t cmd_export_attention(const RunConfig& cfg, std::string_view user, std::ostream& log) {
  const RunPaths paths{cfg.out};
  const Dataset data = load_run_dataset(paths);
  const SubgraphCache cache = load_run_cache(paths, cfg);
  num::ParameterStore params = load_run_model(paths);
  const EntityId* id = data.entities().find(user);
  if (!id || data.entities().kind(*id) != EntityKind::kUser) {
    throw Error(ErrorCode::kInvalidArgument, "unknown user '" + std::string(user) + "'");
  }
  const ModelConfig model = cfg.model_config();
  const std::size_t steps = cache.num_steps();
  const num::Matrix trajectory = user_trajectory(params, model, cache, *id, steps);

  const fs::path path = paths.attention(user);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << "user,step_from,step_to,beta\n";
  std::size_t rows = 0;
  for (std::size_t j = 1; j <= steps; ++j) {
    const Intent intent = next_intent(params, model, trajectory, static_cast<Eigen::Index>(j));
    for (std::size_t t = 0; t < j; ++t) {
      out << user << ',' << t << ',' << j - 1 << ',' << format_double(intent.beta(static_cast<Eigen::Index>(t)))
          << '\n';
      ++rows;
    }
  }
  log << "wrote " << rows << " attention weights to " << path.string() << "\n";
  return rows;
}

void cmd_synth(const fs::path& dir, bool drift, std::uint64_t seed, std::ostream& log) {
  PlantedConfig cfg = drift ? PlantedConfig::drift() : PlantedConfig{};
  cfg.seed = seed;
  const PlantedData data = generate_planted(cfg);
  write_planted(data, dir);
  log << "wrote " << data.log.events.size() << " events and " << data.triples.size() << " triples to "
      << dir.string() << "\n";
}

}  // namespace rete
