#include "rete/num/adam.hpp"

#include <cmath>

namespace rete::num {

void Adam::step(ParameterStore& params) {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (auto& [name, p] : params) {
    if (filter_ && !filter_(name)) continue;
    auto it = state_.find(name);
    if (it == state_.end()) {
      it = state_.emplace(name, Moments{Matrix::Zero(p.value.rows(), p.value.cols()),
                                        Matrix::Zero(p.value.rows(), p.value.cols())}).first;
    }
    Moments& s = it->second;
    s.m = config_.beta1 * s.m + (1.0 - config_.beta1) * p.grad;
    s.v = config_.beta2 * s.v + (1.0 - config_.beta2) * p.grad.cwiseAbs2();
    p.value.array() -= config_.lr * (s.m.array() / c1) / ((s.v.array() / c2).sqrt() + config_.eps);
  }
}

}  // namespace rete::num
