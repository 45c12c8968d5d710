#include "rete/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "rete/error.hpp"
#include "rete/eval/evaluate.hpp"
#include "rete/model/scoring.hpp"
#include "rete/num/adam.hpp"
#include "rete/num/ops.hpp"
#include "rete/seed.hpp"
#include "rete/text.hpp"
#include "rete/train/negatives.hpp"

namespace rete {

void OptimConfig::validate() const {
  if (!(lr > 0.0)) throw Error(ErrorCode::kConfig, "learning rate must be positive");
  if (!(l2 >= 0.0)) throw Error(ErrorCode::kConfig, "l2 weight must be >= 0");
  if (batch_size < 1) throw Error(ErrorCode::kConfig, "batch size must be positive");
  if (epochs < 0) throw Error(ErrorCode::kConfig, "epochs must be >= 0");
  if (patience < 1) throw Error(ErrorCode::kConfig, "patience must be positive");
  if (select_k == 0) throw Error(ErrorCode::kConfig, "selection k must be positive");
}

void KgcConfig::validate() const {
  if (!(margin > 0.0)) throw Error(ErrorCode::kConfig, "kgc margin must be positive");
  if (negatives < 1) throw Error(ErrorCode::kConfig, "kgc negatives must be at least 1");
  if (batch_size < 1) throw Error(ErrorCode::kConfig, "kgc batch size must be positive");
}

void PretrainConfig::validate() const {
  if (epochs < 0) throw Error(ErrorCode::kConfig, "pretrain epochs must be >= 0");
  if (!(lr > 0.0)) throw Error(ErrorCode::kConfig, "pretrain learning rate must be positive");
  if (batch_size < 1) throw Error(ErrorCode::kConfig, "pretrain batch size must be positive");
  if (negatives < 1) throw Error(ErrorCode::kConfig, "pretrain negatives must be at least 1");
  if (!(margin > 0.0)) throw Error(ErrorCode::kConfig, "pretrain margin must be positive");
}

void write_loss_history(const std::vector<EpochLosses>& history, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << "epoch,L_p,L_q,L_KGC,L2,total\n";
  for (const EpochLosses& e : history) {
    out << e.epoch << ',' << format_double(e.l_p) << ',' << format_double(e.l_q) << ','
        << format_double(e.l_kgc) << ',' << format_double(e.l2) << ',' << format_double(e.total) << '\n';
  }
}

num::ParameterStore initialize_parameters(const Dataset& data, const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  num::ParameterStore params;
  std::mt19937_64 x_rng(derive_seed(seed, "init.embeddings"));
  init_embeddings(params, data.entities().size(), cfg.dim, x_rng);
  std::mt19937_64 r_rng(derive_seed(seed, "init.transr"));
  init_transr(params, data.log.relations.size(), cfg.dim, r_rng);
  std::mt19937_64 a_rng(derive_seed(seed, "init.attention"));
  init_attention(params, cfg, a_rng);
  return params;
}

std::vector<StaticTriple> background_facts(const Dataset& data) {
  std::vector<StaticTriple> facts;
  std::set<StaticTriple> seen;
  const std::size_t end = std::min(data.segmentation.split.background, data.num_steps());
  for (std::size_t t = 0; t < end; ++t) {
    for (const Event& e : data.snapshots[t].interactions) {
      StaticTriple f{e.user, e.relation, e.target};
      if (seen.insert(f).second) facts.push_back(f);
    }
  }
  for (const StaticTriple& f : data.triples) {
    if (seen.insert(f).second) facts.push_back(f);
  }
  return facts;
}

namespace {

bool is_transr(std::string_view name) { return name.starts_with("transr."); }
bool is_kgc_parameter(std::string_view name) { return name == "X" || is_transr(name); }

/// Corrupted-tail generator that never returns a known tail of (head, relation).
class TailCorrupter {
 public:
  TailCorrupter(const std::vector<StaticTriple>& facts, const EntityRegistry& entities, std::uint64_t seed)
      : entities_(entities), sampler_(entities, seed) {
    for (const StaticTriple& f : facts) known_[{f.head, f.relation}].push_back(f.tail);
    for (auto& [_, tails] : known_) {
      std::sort(tails.begin(), tails.end());
      tails.erase(std::unique(tails.begin(), tails.end()), tails.end());
    }
  }

  KgcSample corrupt(const StaticTriple& f, int n) {
    const auto& exclude = known_.at({f.head, f.relation});
    return {f, sampler_.draw(entities_.kind(f.tail), exclude, static_cast<std::size_t>(n))};
  }

 private:
  const EntityRegistry& entities_;
  NegativeSampler sampler_;
  std::map<std::pair<EntityId, RelationId>, std::vector<EntityId>> known_;
};

std::size_t count_pairs(std::span<const KgcSample> batch) {
  std::size_t n = 0;
  for (const KgcSample& s : batch) n += s.negative_tails.size();
  return n;
}

/// One shuffled pass of margin updates; returns the summed hinge and the pair count.
std::pair<double, std::size_t> kgc_pass(const std::vector<KgcSample>& samples, num::ParameterStore& params,
                                        num::Adam& adam, int batch_size, double margin,
                                        std::mt19937_64& rng, std::string_view label, int epoch) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(batch_size)) {
    std::vector<KgcSample> batch;
    for (std::size_t i = begin; i < std::min(order.size(), begin + static_cast<std::size_t>(batch_size)); ++i) {
      if (!samples[order[i]].negative_tails.empty()) batch.push_back(samples[order[i]]);
    }
    if (batch.empty()) continue;
    params.zero_grad();
    num::Tape tape;
    ForwardPass pass(tape, params, ModelConfig{});
    Var loss = kgc_loss(pass, batch, margin);
    if (!std::isfinite(loss.scalar())) {
      throw Error(ErrorCode::kNumeric, "non-finite " + std::string(label) + " loss at epoch " +
                                           std::to_string(epoch));
    }
    tape.backward(loss);
    adam.step(params);
    total += loss.scalar();
    pairs += count_pairs(batch);
  }
  return {total, pairs};
}

std::vector<KgcSample> corrupt_all(const std::vector<StaticTriple>& facts, TailCorrupter& corrupter, int n) {
  std::vector<KgcSample> out;
  out.reserve(facts.size());
  for (const StaticTriple& f : facts) out.push_back(corrupter.corrupt(f, n));
  return out;
}

}  // namespace

std::vector<double> pretrain_transr(const std::vector<StaticTriple>& facts, const EntityRegistry& entities,
                                    num::ParameterStore& params, const PretrainConfig& cfg,
                                    std::uint64_t seed) {
  cfg.validate();
  if (facts.empty()) throw Error(ErrorCode::kInvalidArgument, "pretraining needs at least one fact");
  std::vector<double> history;
  if (cfg.epochs == 0) return history;

  TailCorrupter corrupter(facts, entities, derive_seed(seed, "pretrain.negatives"));
  std::mt19937_64 rng(derive_seed(seed, "pretrain.order"));
  num::Adam adam({cfg.lr, 0.9, 0.999, 1e-8}, is_kgc_parameter);
  std::vector<KgcSample> samples = corrupt_all(facts, corrupter, cfg.negatives);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.resample_negatives && epoch > 1) samples = corrupt_all(facts, corrupter, cfg.negatives);
    const auto [total, pairs] = kgc_pass(samples, params, adam, cfg.batch_size, cfg.margin, rng, "pretrain", epoch);
    history.push_back(pairs ? total / static_cast<double>(pairs) : 0.0);
  }
  return history;
}

std::vector<double> pretrain_background(const Dataset& data, num::ParameterStore& params,
                                        const PretrainConfig& cfg, std::uint64_t seed) {
  const auto facts = background_facts(data);
  if (facts.empty()) throw Error(ErrorCode::kInvalidArgument, "background steps contain no facts");
  return pretrain_transr(facts, data.entities(), params, cfg, seed);
}

namespace {

struct RankingTotals {
  double l_p = 0.0;
  double l_q = 0.0;
  double l2 = 0.0;
};

RankingTotals ranking_batch(const Dataset& data, const SubgraphCache& cache, const GroundTruth& truth,
                            const ModelConfig& model, const TrainConfig& cfg, num::ParameterStore& params,
                            std::span<const EntityId> users, NegativeSampler& sampler, int epoch) {
  const Split& split = data.segmentation.split;
  num::Tape tape;
  ForwardPass pass(tape, params, model);

  Var loss_p = tape.constant(num::Matrix::Zero(1, 1));
  Var loss_q = tape.constant(num::Matrix::Zero(1, 1));
  std::size_t n_p = 0, n_q = 0;
  for (EntityId user : users) {
    Var h = pass.encode_trajectory(cache, user, split.train_end() - 1);
    for (std::size_t t = split.train_begin(); t < split.train_end(); ++t) {
      Var intent;
      for (Task task : kTasks) {
        const auto* targets = truth.find(user, t, task);
        if (!targets) continue;
        if (!intent.valid()) intent = temporal_attention(h, pass.temporal(), static_cast<Eigen::Index>(t)).next;
        const EntityKind kind = task == Task::kProduct ? EntityKind::kProduct : EntityKind::kQuery;
        std::vector<EntityId> candidates(targets->begin(), targets->end());
        std::vector<WarpGroup> groups;
        for (std::size_t i = 0; i < targets->size(); ++i) {
          auto negs = sampler.draw(kind, *targets, static_cast<std::size_t>(cfg.warp.negatives));
          if (negs.empty()) continue;
          WarpGroup g{static_cast<Eigen::Index>(i), {}};
          for (EntityId n : negs) {
            g.negatives.push_back(static_cast<Eigen::Index>(candidates.size()));
            candidates.push_back(n);
          }
          groups.push_back(std::move(g));
        }
        if (groups.empty()) continue;
        Var scores = intent * num::transpose(pass.embeddings(candidates));
        Var l = warp_loss(scores, groups, cfg.warp.margin);
        if (!std::isfinite(l.scalar())) {
          throw Error(ErrorCode::kNumeric, "non-finite L_" + std::string(task == Task::kProduct ? "p" : "q") +
                                               " at epoch " + std::to_string(epoch) + ", step " +
                                               std::to_string(t) + ", user " + std::to_string(user.value));
        }
        if (task == Task::kProduct) {
          loss_p = loss_p + l;
          n_p += groups.size();
        } else {
          loss_q = loss_q + l;
          n_q += groups.size();
        }
      }
    }
  }
  if (n_p) loss_p = num::scale(loss_p, 1.0 / static_cast<double>(n_p));
  if (n_q) loss_q = num::scale(loss_q, 1.0 / static_cast<double>(n_q));
  Var l2 = num::scale(pass.l2_penalty(), cfg.optim.l2);
  if (!std::isfinite(l2.scalar())) {
    throw Error(ErrorCode::kNumeric, "non-finite L2 at epoch " + std::to_string(epoch));
  }
  Var total = loss_p + loss_q + l2;
  tape.backward(total);
  return {loss_p.scalar(), loss_q.scalar(), l2.scalar()};
}

}  // namespace

TrainResult train(const Dataset& data, const SubgraphCache& cache, const ModelConfig& model,
                  const TrainConfig& cfg, num::ParameterStore& params) {
  model.validate();
  cfg.warp.validate();
  cfg.optim.validate();
  cfg.kgc.validate();
  const Split& split = data.segmentation.split;
  if (split.train == 0 || split.validation == 0) {
    throw Error(ErrorCode::kConfig, "training needs non-empty train and validation splits");
  }
  if (cache.num_steps() < split.train_end() || static_cast<int>(cache.ensemble_size()) != model.ensemble_size) {
    throw Error(ErrorCode::kMissingArtifact, "subgraph cache does not cover the training steps; run `sample`");
  }

  const GroundTruth truth = GroundTruth::from_dataset(data);
  std::vector<EntityId> users;
  for (EntityId u : data.entities().of_kind(EntityKind::kUser)) {
    if (truth.active(u, split.train_begin(), split.train_end())) users.push_back(u);
  }

  const std::uint64_t seed = cfg.optim.seed;
  NegativeSampler sampler(data.entities(), derive_seed(seed, "train.negatives"));
  std::mt19937_64 order_rng(derive_seed(seed, "train.order"));
  std::mt19937_64 kgc_rng(derive_seed(seed, "kgc.order"));
  num::AdamConfig adam_cfg{cfg.optim.lr, cfg.optim.beta1, cfg.optim.beta2, cfg.optim.adam_eps};
  num::Adam rank_adam(adam_cfg, [](std::string_view n) { return !is_transr(n); });
  num::Adam kgc_adam(adam_cfg, is_kgc_parameter);
  std::vector<StaticTriple> kgc_facts = data.triples;
  std::optional<TailCorrupter> corrupter;
  if (!kgc_facts.empty()) corrupter.emplace(kgc_facts, data.entities(), derive_seed(seed, "kgc.negatives"));

  EvalOptions val;
  val.begin = split.train_end();
  val.end = split.validation_end();
  val.k = cfg.optim.select_k;

  TrainResult result;
  num::ParameterStore best = params;
  int since_best = 0;
  for (int epoch = 1; epoch <= cfg.optim.epochs; ++epoch) {
    EpochLosses e;
    e.epoch = epoch;
    if (corrupter) {
      const auto samples = corrupt_all(kgc_facts, *corrupter, cfg.kgc.negatives);
      const auto [total, pairs] =
          kgc_pass(samples, params, kgc_adam, cfg.kgc.batch_size, cfg.kgc.margin, kgc_rng, "L_KGC", epoch);
      e.l_kgc = pairs ? total / static_cast<double>(pairs) : 0.0;
    }

    std::vector<EntityId> order = users;
    std::shuffle(order.begin(), order.end(), order_rng);
    std::size_t batches = 0;
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(cfg.optim.batch_size)) {
      const std::size_t end = std::min(order.size(), b + static_cast<std::size_t>(cfg.optim.batch_size));
      params.zero_grad();
      const RankingTotals r = ranking_batch(data, cache, truth, model, cfg, params,
                                            std::span<const EntityId>(order).subspan(b, end - b), sampler, epoch);
      rank_adam.step(params);
      e.l_p += r.l_p;
      e.l_q += r.l_q;
      e.l2 += r.l2;
      ++batches;
    }
    if (batches) {
      e.l_p /= static_cast<double>(batches);
      e.l_q /= static_cast<double>(batches);
      e.l2 /= static_cast<double>(batches);
    }
    e.total = e.l_p + e.l_q + e.l_kgc + e.l2;
    e.val_recall = evaluate(params, model, data, cache, truth, val).product.recall;
    result.history.push_back(e);

    if (result.best_epoch == 0 || e.val_recall > result.best_val_recall) {
      result.best_epoch = epoch;
      result.best_val_recall = e.val_recall;
      best = params;
      since_best = 0;
    } else if (++since_best >= cfg.optim.patience) {
      break;
    }
  }
  if (result.best_epoch > 0) params = std::move(best);
  return result;
}

Prediction predict_next(num::ParameterStore& params, const ModelConfig& cfg, const Dataset& data,
                        const SubgraphCache& cache, EntityId user, std::size_t j) {
  if (user.value >= data.entities().size() || data.entities().kind(user) != EntityKind::kUser) {
    throw Error(ErrorCode::kInvalidArgument, "unknown user " + std::to_string(user.value));
  }
  if (j == 0 || j > cache.num_steps()) {
    throw Error(ErrorCode::kInvalidArgument, "prediction step " + std::to_string(j) + " outside 1.." +
                                                 std::to_string(cache.num_steps()));
  }
  const num::Matrix trajectory = user_trajectory(params, cfg, cache, user, j);
  const Intent intent = next_intent(params, cfg, trajectory, static_cast<Eigen::Index>(j));
  const num::Matrix& x = params.at(param_names::kEmbeddings).value;
  return {rank_by_relevance(intent.next, x, data.entities().of_kind(EntityKind::kProduct)),
          rank_by_relevance(intent.next, x, data.entities().of_kind(EntityKind::kQuery))};
}

}  // namespace rete
