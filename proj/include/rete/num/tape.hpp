#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rete/num/parameters.hpp"

namespace rete::num {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; valid until the tape
/// is cleared.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  /// Value of a 1x1 result.
  double scalar() const;

  Tape& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Linear record of executed operations. Each record owns its forward value
/// and an adjoint rule; `backward` replays the rules in exact reverse order.
class Tape {
 public:
  /// Called during backward with the tape and the record's own id; reads
  /// `grad(self)` and accumulates into the grads of its inputs.
  using Adjoint = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  /// Leaf whose gradient is added into `p.grad` on backward.
  Var parameter(Parameter& p);
  /// Rows of `p.value` selected by `rows`; gradients scatter back into `p.grad`.
  Var gather_rows(Parameter& p, std::span<const Eigen::Index> rows);

  /// Registers an operation result. `inputs` decide whether the result needs
  /// a gradient; the adjoint is dropped when none does.
  Var record(Matrix value, std::initializer_list<Var> inputs, Adjoint adjoint);
  Var record(Matrix value, std::span<const Var> inputs, Adjoint adjoint);

  /// Seeds d(output)/d(output) = 1 for a 1x1 output and runs all adjoints.
  void backward(Var output);
  void clear();

  /// With gradients disabled nothing is retained for backward (inference).
  void set_grad_enabled(bool enabled) { grad_enabled_ = enabled; }
  bool grad_enabled() const { return grad_enabled_; }

  std::size_t size() const { return nodes_.size(); }
  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Gradient buffer of a record; zero-filled on first access.
  Matrix& grad(std::size_t id);

  template <class Derived>
  void accumulate(std::size_t id, const Eigen::MatrixBase<Derived>& g) {
    Node& n = nodes_[id];
    if (!n.requires_grad) return;
    if (n.grad.size() == 0) n.grad = g;
    else n.grad += g;
  }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    Adjoint adjoint;
    bool requires_grad = false;
  };

  std::vector<Node> nodes_;
  bool grad_enabled_ = true;
};

}  // namespace rete::num
