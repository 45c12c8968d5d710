#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rete/model/config.hpp"
#include "rete/model/layers.hpp"
#include "rete/num/parameters.hpp"
#include "rete/sampler/ensemble.hpp"

namespace rete {

namespace param_names {
inline constexpr const char* kEmbeddings = "X";
inline constexpr const char* kFusion = "fusion.W";
std::string gat(int layer, std::string_view weight);       // gat.<l>.W_Q|W_K|W_V|a
std::string temporal(std::string_view weight);             // temporal.W_Q|W_K|W_V
std::string transr_matrix(RelationId r);                   // transr.<r>.W
std::string transr_vector(RelationId r);                   // transr.<r>.r
}  // namespace param_names

/// Entity embeddings, Xavier-uniform (num_entities x d).
void init_embeddings(num::ParameterStore& params, std::size_t num_entities, int dim,
                     std::mt19937_64& rng);
/// W_r (Xavier) and r (zero) for every relation id below `num_relations`.
void init_transr(num::ParameterStore& params, std::size_t num_relations, int dim,
                 std::mt19937_64& rng);
/// Structural, fusion and temporal weights (Xavier-uniform).
void init_attention(num::ParameterStore& params, const ModelConfig& cfg, std::mt19937_64& rng);

/// Binds parameters of a store to one tape and runs the forward computations.
/// Each tensor is registered once per pass; embedding rows are gathered on
/// demand and remembered for the regulariser.
class ForwardPass {
 public:
  ForwardPass(num::Tape& tape, num::ParameterStore& params, const ModelConfig& cfg);

  num::Tape& tape() { return tape_; }
  const ModelConfig& config() const { return cfg_; }

  const GatWeights& gat(int layer);
  const TemporalWeights& temporal();
  Var fusion();
  Var transr_matrix(RelationId r);
  Var transr_vector(RelationId r);
  /// Rows of X for `ids`, in order.
  Var embeddings(std::span<const EntityId> ids);

  /// Pooled representation (1 x d) of one subgraph. When `alphas` is given the
  /// per-layer attention matrices are appended to it.
  Var encode_subgraph(const Subgraph& sub, std::vector<Var>* alphas = nullptr);
  /// Fused representation h^t (1 x d) of a user's subgraphs at one step.
  Var encode_step(std::span<const Subgraph> subs);
  /// Rows h^1..h^steps of a user's trajectory (steps x d).
  Var encode_trajectory(const SubgraphCache& cache, EntityId user, std::size_t steps);

  /// Squared Frobenius norm of every bound weight plus the gathered rows of X.
  Var l2_penalty();

 private:
  Var bind(const std::string& name);

  num::Tape& tape_;
  num::ParameterStore& params_;
  ModelConfig cfg_;
  std::map<std::string, Var, std::less<>> bound_;
  std::map<int, GatWeights> gat_;
  std::optional<TemporalWeights> temporal_;
  std::set<Eigen::Index> touched_rows_;
};

/// Per-step representations of a user without recording gradients.
Matrix user_trajectory(num::ParameterStore& params, const ModelConfig& cfg,
                       const SubgraphCache& cache, EntityId user, std::size_t steps);

/// Intent following the first `j` rows of a trajectory, with the weights.
struct Intent {
  Eigen::RowVectorXd next;
  Eigen::VectorXd beta;
};
Intent next_intent(num::ParameterStore& params, const ModelConfig& cfg, const Matrix& trajectory,
                   Eigen::Index j);

}  // namespace rete
