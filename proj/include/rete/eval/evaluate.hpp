#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rete/eval/truth.hpp"
#include "rete/model/config.hpp"
#include "rete/num/parameters.hpp"
#include "rete/sampler/ensemble.hpp"

namespace rete {

/// kFrozen scores every step from the intent after the context window.
/// kAutoregressive feeds each realized step into the trajectory before the
/// next one is scored; parameters never change.
enum class EvalMode { kFrozen, kAutoregressive };

std::string_view to_string(EvalMode mode);
EvalMode parse_eval_mode(std::string_view text);

struct EvalOptions {
  std::size_t begin = 0;  // first scored step
  std::size_t end = 0;    // one past the last scored step
  /// Steps [0, context_end) form the observed history; defaults to `begin`.
  std::optional<std::size_t> context_end;
  std::size_t k = 20;
  EvalMode mode = EvalMode::kFrozen;
  bool keep_user_scores = false;
};

struct StepMetrics {
  Task task;
  std::size_t step;
  double recall;
  double ndcg;
  std::size_t n_users;
};

struct UserScore {
  EntityId user;
  std::size_t step;
  Task task;
  double recall;
  double ndcg;
};

struct TaskSummary {
  double recall = 0.0;
  double ndcg = 0.0;
  std::size_t n_pairs = 0;
};

struct MetricsReport {
  std::size_t k = 20;
  EvalMode mode = EvalMode::kFrozen;
  std::vector<StepMetrics> steps;
  TaskSummary product;
  TaskSummary query;
  /// Users with ground truth in the window but no history before it.
  std::size_t skipped_users = 0;
  std::vector<UserScore> user_scores;

  const TaskSummary& summary(Task task) const { return task == Task::kProduct ? product : query; }

  std::string to_json() const;
  void write_json(const std::filesystem::path& path) const;
  /// `user,step,task,recall,ndcg`
  void write_user_scores(const std::filesystem::path& path) const;
};

/// Scores every (user, step, task) with non-empty truth in [begin, end).
/// Aggregates are means over (user, step) pairs.
MetricsReport evaluate(num::ParameterStore& params, const ModelConfig& cfg, const Dataset& data,
                       const SubgraphCache& cache, const GroundTruth& truth, const EvalOptions& opts);

}  // namespace rete
