#pragma once

#include <span>
#include <vector>

#include "rete/model/encoder.hpp"

namespace rete {

struct WarpConfig {
  double margin = 1.0;
  int negatives = 10;

  void validate() const;
};

/// L(K) = sum_{k=1..K} 1/k.
double harmonic(std::size_t k);

/// Number of negatives violating the margin, clamped to at least 1.
std::size_t warp_rank(double pos, std::span<const double> negs, double margin);

/// L(rank) * sum_neg max(0, margin - pos + neg) / rank for one positive.
double warp_loss(double pos, std::span<const double> negs, double margin);

/// One positive and its negatives, as column indices into a score row.
struct WarpGroup {
  Eigen::Index positive;
  std::vector<Eigen::Index> negatives;
};

/// Sum of per-positive WARP losses over `groups`, reading scores from a 1 x m
/// row. The rank weight is held constant when differentiating.
Var warp_loss(Var scores, std::span<const WarpGroup> groups, double margin);

/// Static triple with corrupted tails sharing its head and relation.
struct KgcSample {
  StaticTriple positive;
  std::vector<EntityId> negative_tails;
};

/// sum over (sample, negative) of max(0, f_r(h, t) + margin - f_r(h, t-)).
Var kgc_loss(ForwardPass& pass, std::span<const KgcSample> batch, double margin);

/// Plain evaluation of the same loss from a parameter store.
double kgc_loss_value(num::ParameterStore& params, std::span<const KgcSample> batch, double margin);

}  // namespace rete
