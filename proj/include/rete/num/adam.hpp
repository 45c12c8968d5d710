#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "rete/num/parameters.hpp"

namespace rete::num {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moment buffers are created lazily per parameter
/// name, so one optimizer can serve a subset of a store.
class Adam {
 public:
  using Filter = std::function<bool(std::string_view)>;

  explicit Adam(AdamConfig config, Filter filter = {}) : config_(config), filter_(std::move(filter)) {}

  /// Applies one update to every parameter accepted by the filter, using its
  /// current `grad`. Gradients are left untouched.
  void step(ParameterStore& params);
  long steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  struct Moments {
    Matrix m;
    Matrix v;
  };
  AdamConfig config_;
  Filter filter_;
  std::map<std::string, Moments, std::less<>> state_;
  long t_ = 0;
};

}  // namespace rete::num
