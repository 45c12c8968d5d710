#pragma once

#include <span>

#include "rete/model/config.hpp"
#include "rete/num/tape.hpp"
#include "rete/sampler/subgraph.hpp"

namespace rete {

using num::Matrix;
using num::Var;

/// Additive attention mask of a subgraph: 0 on edges, -inf elsewhere. With
/// `self_loop_fallback` a node without in-subgraph edges gets a 0 on its
/// diagonal; otherwise such a node is an error.
Matrix neighbor_mask(const Subgraph& sub, bool self_loop_fallback);

struct GatWeights {
  Var w_q;  // d x d
  Var w_k;  // d x d
  Var w_v;  // d x d
  Var a;    // 2d x 1, query half first
};

struct GatOutput {
  Var h;      // n x d
  Var alpha;  // n x n, row u holds the weights over u's neighbours
};

/// One graph-attention layer applied to every node of a subgraph. Row vectors:
/// score(u, v) = act(a_q . (h_u W_Q) + a_k . (h_v W_K)), alpha = softmax over
/// the neighbours of u, h'_u = sigma(sum_v alpha_uv h_v W_V).
GatOutput gat_layer(Var h_in, Var mask, const GatWeights& w, num::Activation sigma,
                    double attention_slope);

/// Pools per-layer outputs (each n x d, row 0 = centre) to 1 x d.
Var structural_pool(std::span<const Var> layer_outputs, PoolMode mode);

/// sigma([r_1 | ... | r_s] W) with W of shape (s*d) x d.
Var fuse_subgraphs(std::span<const Var> reps, Var w, num::Activation sigma);

struct TemporalWeights {
  Var w_q;
  Var w_k;
  Var w_v;
};

struct TemporalOutput {
  Var next;  // 1 x d, the intent following step j
  Var beta;  // j x 1, weights of rows 1..j
};

/// Causal attention over the first `j` rows of H (1 <= j <= rows). Only
/// rows 1..j are read, so later rows cannot influence the result.
TemporalOutput temporal_attention(Var h, const TemporalWeights& w, Eigen::Index j);

/// ||(h - t) W_r + r||^2 for row vectors h, t, r.
Var transr_score(Var h, Var t, Var w_r, Var r);

/// Inner product of two row vectors.
Var relevance(Var user, Var item);
double relevance(const Eigen::RowVectorXd& user, const Eigen::RowVectorXd& item);

}  // namespace rete
