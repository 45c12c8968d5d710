#pragma once

#include <string>
#include <string_view>

#include "rete/num/ops.hpp"

namespace rete {

/// How per-layer outputs of one subgraph are pooled into a single vector.
/// kLiteral averages the centre's rows over the layers; kEntityMean averages
/// every entity's rows over the layers.
enum class PoolMode { kLiteral, kEntityMean };

std::string_view to_string(PoolMode mode);
PoolMode parse_pool_mode(std::string_view text);

struct ModelConfig {
  int dim = 128;
  int layers = 3;
  int ensemble_size = 2;
  num::Activation aggregate_activation = num::Activation::kTanh;
  num::Activation fusion_activation = num::Activation::kTanh;
  double attention_slope = 0.2;
  PoolMode pool = PoolMode::kLiteral;
  /// Nodes with no edge inside their subgraph attend to themselves.
  bool self_loop_fallback = true;

  /// Throws Error(kConfig) on non-positive sizes.
  void validate() const;
};

}  // namespace rete
