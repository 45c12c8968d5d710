#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rete/num/tape.hpp"

namespace rete::num {

struct GradCheckResult {
  /// max |g_tape - g_fd| / max(1, |g_fd|) over every checked scalar.
  double max_error = 0.0;
  std::string worst_parameter;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  std::size_t checked = 0;
};

/// Compares reverse-mode gradients of the 1x1 function `f` against central
/// finite differences with step `h`. `only` restricts the check to the named
/// parameters; empty means all. Throws Error(kNumeric) when f is not finite.
GradCheckResult grad_check(const std::function<Var(Tape&)>& f, ParameterStore& params,
                           double h = 1e-6, const std::vector<std::string>& only = {});

}  // namespace rete::num
