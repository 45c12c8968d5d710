#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "rete/eval/truth.hpp"
#include "rete/model/config.hpp"
#include "rete/sampler/ensemble.hpp"
#include "rete/train/losses.hpp"

namespace rete {

/// Tuning grids used for model selection.
inline constexpr std::array<double, 5> kLearningRateGrid{1e-4, 5e-4, 1e-3, 5e-3, 1e-2};
inline constexpr std::array<double, 3> kL2Grid{0.005, 0.05, 0.5};

struct OptimConfig {
  double lr = 1e-2;
  double l2 = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int batch_size = 4;
  int epochs = 50;
  int patience = 5;
  /// Cut-off of the validation product recall used for early stopping.
  std::size_t select_k = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KgcConfig {
  double margin = 1.0;
  int negatives = 2;
  int batch_size = 128;

  void validate() const;
};

struct PretrainConfig {
  int epochs = 30;
  double lr = 1e-2;
  int batch_size = 128;
  int negatives = 2;
  double margin = 1.0;
  /// Draw fresh corrupted tails every epoch instead of once.
  bool resample_negatives = true;

  void validate() const;
};

struct TrainConfig {
  WarpConfig warp;
  OptimConfig optim;
  KgcConfig kgc;
  PretrainConfig pretrain;
};

struct EpochLosses {
  int epoch = 0;
  double l_p = 0.0;
  double l_q = 0.0;
  double l_kgc = 0.0;
  double l2 = 0.0;
  double total = 0.0;
  double val_recall = 0.0;
};

struct TrainResult {
  std::vector<EpochLosses> history;
  int best_epoch = 0;
  double best_val_recall = 0.0;
};

/// `epoch,L_p,L_q,L_KGC,L2,total`
void write_loss_history(const std::vector<EpochLosses>& history, const std::filesystem::path& path);

/// Xavier-initialised embeddings, TransR tensors for every relation and the
/// attention weights, all drawn from streams derived from `seed`.
num::ParameterStore initialize_parameters(const Dataset& data, const ModelConfig& cfg, std::uint64_t seed);

/// Interaction edges of the background steps plus the static triples, as
/// (head, relation, tail) facts without duplicates.
std::vector<StaticTriple> background_facts(const Dataset& data);

/// TransR margin training of X and the relation tensors on `facts`. Returns
/// the mean hinge per (fact, negative) pair of each epoch, measured before
/// that epoch's updates.
std::vector<double> pretrain_transr(const std::vector<StaticTriple>& facts, const EntityRegistry& entities,
                                    num::ParameterStore& params, const PretrainConfig& cfg,
                                    std::uint64_t seed);

/// pretrain_transr on background_facts(data). Throws if the background is empty.
std::vector<double> pretrain_background(const Dataset& data, num::ParameterStore& params,
                                        const PretrainConfig& cfg, std::uint64_t seed);

/// Alternating optimisation: each epoch runs one KGC pass over the product
/// graph, then one ranking pass over the training steps. The parameters of
/// the epoch with the best validation product recall are kept.
TrainResult train(const Dataset& data, const SubgraphCache& cache, const ModelConfig& model,
                  const TrainConfig& cfg, num::ParameterStore& params);

struct Prediction {
  std::vector<EntityId> products;
  std::vector<EntityId> queries;
};

/// Rankings for the step after the first `j` steps of a user's trajectory.
Prediction predict_next(num::ParameterStore& params, const ModelConfig& cfg, const Dataset& data,
                        const SubgraphCache& cache, EntityId user, std::size_t j);

}  // namespace rete
