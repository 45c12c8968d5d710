#include "rete/train/losses.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "rete/error.hpp"
#include "rete/num/ops.hpp"

namespace rete {

void WarpConfig::validate() const {
  if (!(margin > 0.0)) throw Error(ErrorCode::kConfig, "warp margin must be positive");
  if (negatives < 1) throw Error(ErrorCode::kConfig, "warp negatives must be at least 1");
}

double harmonic(std::size_t k) {
  double sum = 0.0;
  for (std::size_t i = 1; i <= k; ++i) sum += 1.0 / static_cast<double>(i);
  return sum;
}

std::size_t warp_rank(double pos, std::span<const double> negs, double margin) {
  std::size_t violations = 0;
  for (double neg : negs) violations += neg + margin > pos ? 1 : 0;
  return std::max<std::size_t>(1, violations);
}

double warp_loss(double pos, std::span<const double> negs, double margin) {
  const std::size_t rank = warp_rank(pos, negs, margin);
  double hinges = 0.0;
  for (double neg : negs) hinges += std::max(0.0, margin - pos + neg);
  return harmonic(rank) * hinges / static_cast<double>(rank);
}

Var warp_loss(Var scores, std::span<const WarpGroup> groups, double margin) {
  if (scores.rows() != 1) throw Error(ErrorCode::kShape, "warp_loss: scores must be a single row");
  const num::Matrix& s = scores.value();
  std::vector<double> weights;
  weights.reserve(groups.size());
  double total = 0.0;
  std::vector<double> negs;
  for (const WarpGroup& g : groups) {
    if (g.negatives.empty()) throw Error(ErrorCode::kInvalidArgument, "warp_loss: positive without negatives");
    negs.clear();
    for (Eigen::Index j : g.negatives) negs.push_back(s(0, j));
    const double pos = s(0, g.positive);
    const std::size_t rank = warp_rank(pos, negs, margin);
    const double w = harmonic(rank) / static_cast<double>(rank);
    weights.push_back(w);
    for (double neg : negs) total += w * std::max(0.0, margin - pos + neg);
  }
  std::vector<WarpGroup> kept(groups.begin(), groups.end());
  const std::size_t id = scores.id();
  return scores.tape().record(
      num::Matrix::Constant(1, 1, total), {scores},
      [id, kept = std::move(kept), weights = std::move(weights), margin](num::Tape& t, std::size_t self) {
        const double g = t.grad(self)(0, 0);
        const num::Matrix& s = t.value(id);
        num::Matrix ds = num::Matrix::Zero(1, s.cols());
        for (std::size_t k = 0; k < kept.size(); ++k) {
          const double pos = s(0, kept[k].positive);
          for (Eigen::Index j : kept[k].negatives) {
            if (margin - pos + s(0, j) > 0.0) {
              ds(0, j) += g * weights[k];
              ds(0, kept[k].positive) -= g * weights[k];
            }
          }
        }
        t.accumulate(id, ds);
      });
}

Var kgc_loss(ForwardPass& pass, std::span<const KgcSample> batch, double margin) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "kgc_loss: empty batch");
  std::map<RelationId, std::vector<const KgcSample*>> by_relation;
  for (const KgcSample& s : batch) by_relation[s.positive.relation].push_back(&s);

  num::Tape& tape = pass.tape();
  Var total = tape.constant(num::Matrix::Zero(1, 1));
  for (const auto& [relation, samples] : by_relation) {
    std::vector<EntityId> heads, tails, negs;
    for (const KgcSample* s : samples) {
      for (EntityId neg : s->negative_tails) {
        heads.push_back(s->positive.head);
        tails.push_back(s->positive.tail);
        negs.push_back(neg);
      }
    }
    if (heads.empty()) continue;
    Var w = pass.transr_matrix(relation);
    Var r = pass.transr_vector(relation);
    Var ones_n = tape.constant(num::Matrix::Ones(static_cast<Eigen::Index>(heads.size()), 1));
    Var ones_d = tape.constant(num::Matrix::Ones(w.cols(), 1));
    Var r_rows = ones_n * r;
    Var h = pass.embeddings(heads);
    auto score = [&](Var t) {
      Var proj = num::sub(h, t) * w + r_rows;
      return num::hadamard(proj, proj) * ones_d;
    };
    Var f_pos = score(pass.embeddings(tails));
    Var f_neg = score(pass.embeddings(negs));
    total = total + num::sum(num::hinge(num::add_scalar(f_pos - f_neg, margin)));
  }
  return total;
}

double kgc_loss_value(num::ParameterStore& params, std::span<const KgcSample> batch, double margin) {
  num::Tape tape;
  tape.set_grad_enabled(false);
  ForwardPass pass(tape, params, ModelConfig{});
  return kgc_loss(pass, batch, margin).scalar();
}

}  // namespace rete
