#include "rete/model/encoder.hpp"

#include "rete/error.hpp"

namespace rete {

namespace param_names {

std::string gat(int layer, std::string_view weight) {
  return "gat." + std::to_string(layer) + "." + std::string(weight);
}
std::string temporal(std::string_view weight) { return "temporal." + std::string(weight); }
std::string transr_matrix(RelationId r) { return "transr." + std::to_string(r.value) + ".W"; }
std::string transr_vector(RelationId r) { return "transr." + std::to_string(r.value) + ".r"; }

}  // namespace param_names

void init_embeddings(num::ParameterStore& params, std::size_t num_entities, int dim,
                     std::mt19937_64& rng) {
  params.add(param_names::kEmbeddings,
             num::xavier_uniform(static_cast<Eigen::Index>(num_entities), dim, rng));
}

void init_transr(num::ParameterStore& params, std::size_t num_relations, int dim,
                 std::mt19937_64& rng) {
  for (std::uint32_t r = 0; r < num_relations; ++r) {
    params.add(param_names::transr_matrix(RelationId{r}), num::xavier_uniform(dim, dim, rng));
    params.add(param_names::transr_vector(RelationId{r}), Matrix::Zero(1, dim));
  }
}

void init_attention(num::ParameterStore& params, const ModelConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const int d = cfg.dim;
  for (int l = 1; l <= cfg.layers; ++l) {
    params.add(param_names::gat(l, "W_Q"), num::xavier_uniform(d, d, rng));
    params.add(param_names::gat(l, "W_K"), num::xavier_uniform(d, d, rng));
    params.add(param_names::gat(l, "W_V"), num::xavier_uniform(d, d, rng));
    params.add(param_names::gat(l, "a"), num::xavier_uniform(2 * d, 1, rng));
  }
  params.add(param_names::kFusion, num::xavier_uniform(cfg.ensemble_size * d, d, rng));
  params.add(param_names::temporal("W_Q"), num::xavier_uniform(d, d, rng));
  params.add(param_names::temporal("W_K"), num::xavier_uniform(d, d, rng));
  params.add(param_names::temporal("W_V"), num::xavier_uniform(d, d, rng));
}

ForwardPass::ForwardPass(num::Tape& tape, num::ParameterStore& params, const ModelConfig& cfg)
    : tape_(tape), params_(params), cfg_(cfg) {}

Var ForwardPass::bind(const std::string& name) {
  if (auto it = bound_.find(name); it != bound_.end()) return it->second;
  Var v = tape_.parameter(params_.at(name));
  bound_.emplace(name, v);
  return v;
}

const GatWeights& ForwardPass::gat(int layer) {
  if (auto it = gat_.find(layer); it != gat_.end()) return it->second;
  GatWeights w{bind(param_names::gat(layer, "W_Q")), bind(param_names::gat(layer, "W_K")),
               bind(param_names::gat(layer, "W_V")), bind(param_names::gat(layer, "a"))};
  return gat_.emplace(layer, w).first->second;
}

const TemporalWeights& ForwardPass::temporal() {
  if (!temporal_) {
    temporal_ = TemporalWeights{bind(param_names::temporal("W_Q")), bind(param_names::temporal("W_K")),
                                bind(param_names::temporal("W_V"))};
  }
  return *temporal_;
}

Var ForwardPass::fusion() { return bind(param_names::kFusion); }

Var ForwardPass::transr_matrix(RelationId r) {
  const std::string name = param_names::transr_matrix(r);
  if (!params_.contains(name)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown relation " + std::to_string(r.value));
  }
  return bind(name);
}

Var ForwardPass::transr_vector(RelationId r) {
  const std::string name = param_names::transr_vector(r);
  if (!params_.contains(name)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown relation " + std::to_string(r.value));
  }
  return bind(name);
}

Var ForwardPass::embeddings(std::span<const EntityId> ids) {
  num::Parameter& x = params_.at(param_names::kEmbeddings);
  std::vector<Eigen::Index> rows;
  rows.reserve(ids.size());
  for (EntityId id : ids) {
    const auto r = static_cast<Eigen::Index>(id.value);
    if (r >= x.value.rows()) {
      throw Error(ErrorCode::kInvalidArgument, "entity " + std::to_string(id.value) + " has no embedding");
    }
    rows.push_back(r);
    touched_rows_.insert(r);
  }
  return tape_.gather_rows(x, rows);
}

Var ForwardPass::encode_subgraph(const Subgraph& sub, std::vector<Var>* alphas) {
  Var mask = tape_.constant(neighbor_mask(sub, cfg_.self_loop_fallback));
  Var h = embeddings(sub.entities);
  std::vector<Var> outputs;
  outputs.reserve(static_cast<std::size_t>(cfg_.layers));
  for (int l = 1; l <= cfg_.layers; ++l) {
    GatOutput out = gat_layer(h, mask, gat(l), cfg_.aggregate_activation, cfg_.attention_slope);
    if (alphas) alphas->push_back(out.alpha);
    h = out.h;
    outputs.push_back(h);
  }
  return structural_pool(outputs, cfg_.pool);
}

Var ForwardPass::encode_step(std::span<const Subgraph> subs) {
  if (static_cast<int>(subs.size()) != cfg_.ensemble_size) {
    throw Error(ErrorCode::kShape, "expected " + std::to_string(cfg_.ensemble_size) +
                                       " subgraphs per step, got " + std::to_string(subs.size()));
  }
  std::vector<Var> reps;
  reps.reserve(subs.size());
  for (const Subgraph& sub : subs) reps.push_back(encode_subgraph(sub));
  return fuse_subgraphs(reps, fusion(), cfg_.fusion_activation);
}

Var ForwardPass::encode_trajectory(const SubgraphCache& cache, EntityId user, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::kInvalidArgument, "trajectory needs at least one step");
  std::vector<Var> rows;
  rows.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) rows.push_back(encode_step(cache.at(user, t)));
  return rows.size() == 1 ? rows.front() : num::concat_rows(rows);
}

Var ForwardPass::l2_penalty() {
  Matrix zero = Matrix::Zero(1, 1);
  Var total = tape_.constant(zero);
  for (const auto& [name, v] : bound_) total = total + num::squared_norm(v);
  if (!touched_rows_.empty()) {
    std::vector<Eigen::Index> rows(touched_rows_.begin(), touched_rows_.end());
    total = total + num::squared_norm(tape_.gather_rows(params_.at(param_names::kEmbeddings), rows));
  }
  return total;
}

Matrix user_trajectory(num::ParameterStore& params, const ModelConfig& cfg,
                       const SubgraphCache& cache, EntityId user, std::size_t steps) {
  num::Tape tape;
  tape.set_grad_enabled(false);
  ForwardPass pass(tape, params, cfg);
  return pass.encode_trajectory(cache, user, steps).value();
}

Intent next_intent(num::ParameterStore& params, const ModelConfig& cfg, const Matrix& trajectory,
                   Eigen::Index j) {
  num::Tape tape;
  tape.set_grad_enabled(false);
  ForwardPass pass(tape, params, cfg);
  TemporalOutput out = temporal_attention(tape.constant(trajectory), pass.temporal(), j);
  return {out.next.value(), out.beta.value()};
}

}  // namespace rete
