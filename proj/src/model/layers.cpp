#include "rete/model/layers.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "rete/error.hpp"
#include "rete/num/ops.hpp"

namespace rete {

std::string_view to_string(PoolMode mode) {
  return mode == PoolMode::kLiteral ? "literal" : "entity-mean";
}

PoolMode parse_pool_mode(std::string_view text) {
  if (text == "literal") return PoolMode::kLiteral;
  if (text == "entity-mean") return PoolMode::kEntityMean;
  throw Error(ErrorCode::kConfig, "unknown pool mode '" + std::string(text) + "'");
}

void ModelConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::kConfig, "dim must be positive");
  if (layers < 1) throw Error(ErrorCode::kConfig, "layers must be positive");
  if (ensemble_size < 1) throw Error(ErrorCode::kConfig, "ensemble size must be positive");
  if (!(attention_slope >= 0.0)) throw Error(ErrorCode::kConfig, "attention slope must be >= 0");
}

Matrix neighbor_mask(const Subgraph& sub, bool self_loop_fallback) {
  const auto n = static_cast<Eigen::Index>(sub.size());
  Matrix mask = Matrix::Constant(n, n, -std::numeric_limits<double>::infinity());
  std::vector<bool> has_edge(sub.size(), false);
  for (const auto& [a, b] : sub.edges) {
    mask(a, b) = 0.0;
    mask(b, a) = 0.0;
    has_edge[a] = has_edge[b] = true;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (has_edge[static_cast<std::size_t>(i)]) continue;
    if (!self_loop_fallback) {
      throw Error(ErrorCode::kInvalidArgument,
                  "entity " + std::to_string(sub.entities[static_cast<std::size_t>(i)].value) +
                      " has no neighbour in the subgraph of user " + std::to_string(sub.center.value));
    }
    mask(i, i) = 0.0;
  }
  return mask;
}

namespace {

std::vector<Eigen::Index> index_range(Eigen::Index begin, Eigen::Index end) {
  std::vector<Eigen::Index> out(static_cast<std::size_t>(end - begin));
  std::iota(out.begin(), out.end(), begin);
  return out;
}

}  // namespace

GatOutput gat_layer(Var h_in, Var mask, const GatWeights& w, num::Activation sigma,
                    double attention_slope) {
  const Eigen::Index d = w.w_q.cols();
  if (w.a.rows() != 2 * d || w.a.cols() != 1) {
    throw Error(ErrorCode::kShape, "gat_layer: attention vector must be " + std::to_string(2 * d) + "x1");
  }
  const auto lo = index_range(0, d);
  const auto hi = index_range(d, 2 * d);
  Var a_q = num::select_rows(w.a, lo);
  Var a_k = num::select_rows(w.a, hi);
  Var q = (h_in * w.w_q) * a_q;
  Var k = (h_in * w.w_k) * a_k;
  Var scores = num::leaky_relu(num::outer_sum(q, num::transpose(k)), attention_slope);
  Var alpha = num::masked_softmax_rows(scores + mask);
  Var h = num::activate(alpha * (h_in * w.w_v), sigma);
  return {h, alpha};
}

Var structural_pool(std::span<const Var> layer_outputs, PoolMode mode) {
  if (layer_outputs.empty()) throw Error(ErrorCode::kInvalidArgument, "structural_pool: no layers");
  std::vector<Var> rows;
  rows.reserve(layer_outputs.size());
  for (const Var& h : layer_outputs) {
    rows.push_back(mode == PoolMode::kLiteral ? num::row(h, 0) : num::mean_rows(h));
  }
  if (rows.size() == 1) return rows.front();
  return num::mean_rows(num::concat_rows(rows));
}

Var fuse_subgraphs(std::span<const Var> reps, Var w, num::Activation sigma) {
  if (reps.empty()) throw Error(ErrorCode::kInvalidArgument, "fuse_subgraphs: no subgraph representations");
  const Eigen::Index d = w.cols();
  if (static_cast<Eigen::Index>(reps.size()) * d != w.rows()) {
    throw Error(ErrorCode::kShape, "fuse_subgraphs: " + std::to_string(reps.size()) +
                                       " representations do not match a fusion matrix of " +
                                       std::to_string(w.rows()) + "x" + std::to_string(d));
  }
  return num::activate(num::concat_cols(reps) * w, sigma);
}

TemporalOutput temporal_attention(Var h, const TemporalWeights& w, Eigen::Index j) {
  if (j < 1 || j > h.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "temporal_attention: query step " + std::to_string(j) +
                                                 " outside 1.." + std::to_string(h.rows()));
  }
  Var past = num::top_rows(h, j);
  Var queries = past * w.w_q;
  Var key = num::row(past, j - 1) * w.w_k;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(h.cols()));
  Var scores = num::scale(key * num::transpose(queries), inv_sqrt_d);
  Var beta = num::transpose(num::masked_softmax_rows(scores));
  Var next = num::transpose(beta) * (past * w.w_v);
  return {next, beta};
}

Var transr_score(Var h, Var t, Var w_r, Var r) {
  return num::squared_norm(num::sub(h, t) * w_r + r);
}

Var relevance(Var user, Var item) { return num::dot(user, item); }

double relevance(const Eigen::RowVectorXd& user, const Eigen::RowVectorXd& item) {
  if (user.size() != item.size()) {
    throw Error(ErrorCode::kShape, "relevance: dimensions " + std::to_string(user.size()) + " and " +
                                       std::to_string(item.size()));
  }
  return user.dot(item);
}

}  // namespace rete
