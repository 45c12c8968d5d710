#include "rete/eval/evaluate.hpp"

#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "rete/error.hpp"
#include "rete/eval/metrics.hpp"
#include "rete/model/encoder.hpp"
#include "rete/model/scoring.hpp"
#include "rete/text.hpp"

namespace rete {

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::kFrozen ? "frozen" : "autoregressive";
}

EvalMode parse_eval_mode(std::string_view text) {
  if (text == "frozen") return EvalMode::kFrozen;
  if (text == "autoregressive") return EvalMode::kAutoregressive;
  throw Error(ErrorCode::kConfig, "unknown eval mode '" + std::string(text) + "'");
}

MetricsReport evaluate(num::ParameterStore& params, const ModelConfig& cfg, const Dataset& data,
                       const SubgraphCache& cache, const GroundTruth& truth, const EvalOptions& opts) {
  const std::size_t context = opts.context_end.value_or(opts.begin);
  if (opts.begin >= opts.end || opts.end > data.num_steps()) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation window [" + std::to_string(opts.begin) + ", " +
                                                 std::to_string(opts.end) + ") is not within " +
                                                 std::to_string(data.num_steps()) + " steps");
  }
  if (context == 0 || context > opts.begin) {
    throw Error(ErrorCode::kInvalidArgument, "context must end within (0, " + std::to_string(opts.begin) + "]");
  }
  if (opts.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");

  const std::vector<EntityId> products = data.entities().of_kind(EntityKind::kProduct);
  const std::vector<EntityId> queries = data.entities().of_kind(EntityKind::kQuery);
  const num::Matrix& x = params.at("X").value;

  std::set<EntityId> users;
  for (std::size_t t = opts.begin; t < opts.end; ++t) {
    for (const auto& [user, _] : truth.steps[t]) users.insert(user);
  }

  MetricsReport report;
  report.k = opts.k;
  report.mode = opts.mode;
  std::map<std::pair<int, std::size_t>, StepMetrics> per_step;

  for (EntityId user : users) {
    if (!truth.active(user, 0, context)) {
      ++report.skipped_users;
      continue;
    }
    const std::size_t rows = opts.mode == EvalMode::kFrozen ? context : opts.end - 1;
    const num::Matrix trajectory = user_trajectory(params, cfg, cache, user, rows);
    Eigen::RowVectorXd frozen;
    if (opts.mode == EvalMode::kFrozen) {
      frozen = next_intent(params, cfg, trajectory, static_cast<Eigen::Index>(context)).next;
    }
    for (std::size_t t = opts.begin; t < opts.end; ++t) {
      const Eigen::RowVectorXd intent =
          opts.mode == EvalMode::kFrozen
              ? frozen
              : next_intent(params, cfg, trajectory, static_cast<Eigen::Index>(t)).next;
      for (Task task : kTasks) {
        const auto* targets = truth.find(user, t, task);
        if (!targets) continue;
        const auto ranked = rank_by_relevance(intent, x, task == Task::kProduct ? products : queries);
        const double r = recall_at_k(ranked, *targets, opts.k);
        const double n = ndcg_at_k(ranked, *targets, opts.k);
        auto& step = per_step.try_emplace({static_cast<int>(task), t}, StepMetrics{task, t, 0.0, 0.0, 0})
                         .first->second;
        step.recall += r;
        step.ndcg += n;
        ++step.n_users;
        TaskSummary& s = task == Task::kProduct ? report.product : report.query;
        s.recall += r;
        s.ndcg += n;
        ++s.n_pairs;
        if (opts.keep_user_scores) report.user_scores.push_back({user, t, task, r, n});
      }
    }
  }

  if (report.product.n_pairs + report.query.n_pairs == 0) {
    throw Error(ErrorCode::kInvalidArgument, "no ground truth for any evaluated user in steps [" +
                                                 std::to_string(opts.begin) + ", " +
                                                 std::to_string(opts.end) + ")");
  }
  for (auto& [_, m] : per_step) {
    m.recall /= static_cast<double>(m.n_users);
    m.ndcg /= static_cast<double>(m.n_users);
    report.steps.push_back(m);
  }
  for (TaskSummary* s : {&report.product, &report.query}) {
    if (s->n_pairs == 0) continue;
    s->recall /= static_cast<double>(s->n_pairs);
    s->ndcg /= static_cast<double>(s->n_pairs);
  }
  return report;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const StepMetrics& m : steps) {
    records.push_back({{"task", to_string(m.task)},
                       {"step", m.step},
                       {"k", k},
                       {"recall", m.recall},
                       {"ndcg", m.ndcg},
                       {"n_users", m.n_users}});
  }
  nlohmann::ordered_json aggregate = nlohmann::ordered_json::array();
  for (Task task : kTasks) {
    const TaskSummary& s = summary(task);
    aggregate.push_back({{"task", to_string(task)},
                         {"k", k},
                         {"recall", s.recall},
                         {"ndcg", s.ndcg},
                         {"n_pairs", s.n_pairs}});
  }
  nlohmann::ordered_json doc;
  doc["mode"] = to_string(mode);
  doc["k"] = k;
  doc["steps"] = std::move(records);
  doc["aggregate"] = std::move(aggregate);
  doc["skipped_users"] = skipped_users;
  return doc.dump(2) + "\n";
}

void MetricsReport::write_json(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << to_json();
}

void MetricsReport::write_user_scores(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << "user,step,task,recall,ndcg\n";
  for (const UserScore& s : user_scores) {
    out << s.user.value << ',' << s.step << ',' << to_string(s.task) << ',' << format_double(s.recall)
        << ',' << format_double(s.ndcg) << '\n';
  }
}

}  // namespace rete
