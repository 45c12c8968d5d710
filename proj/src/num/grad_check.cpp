#include "rete/num/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "rete/error.hpp"

namespace rete::num {

namespace {

double evaluate(const std::function<Var(Tape&)>& f) {
  Tape tape;
  tape.set_grad_enabled(false);
  const double v = f(tape).scalar();
  if (!std::isfinite(v)) throw Error(ErrorCode::kNumeric, "grad_check: function value is not finite");
  return v;
}

}  // namespace

GradCheckResult grad_check(const std::function<Var(Tape&)>& f, ParameterStore& params, double h,
                           const std::vector<std::string>& only) {
  params.zero_grad();
  {
    Tape tape;
    Var out = f(tape);
    if (!std::isfinite(out.scalar())) {
      throw Error(ErrorCode::kNumeric, "grad_check: function value is not finite");
    }
    tape.backward(out);
  }

  GradCheckResult result;
  for (auto& [name, p] : params) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.value.cols(); ++j) {
        const double saved = p.value(i, j);
        p.value(i, j) = saved + h;
        const double up = evaluate(f);
        p.value(i, j) = saved - h;
        const double down = evaluate(f);
        p.value(i, j) = saved;
        const double fd = (up - down) / (2.0 * h);
        const double err = std::abs(p.grad(i, j) - fd) / std::max(1.0, std::abs(fd));
        ++result.checked;
        if (err > result.max_error || result.worst_parameter.empty()) {
          result.max_error = std::max(result.max_error, err);
          result.worst_parameter = name;
          result.worst_row = i;
          result.worst_col = j;
        }
      }
    }
  }
  return result;
}

}  // namespace rete::num
