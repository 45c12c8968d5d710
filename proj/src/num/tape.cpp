#include "rete/num/tape.hpp"

#include <string>

#include "rete/error.hpp"

namespace rete::num {

const Matrix& Var::value() const { return tape_->value(id_); }

double Var::scalar() const {
  const Matrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    throw Error(ErrorCode::kShape, "scalar(): value is " + std::to_string(v.rows()) + "x" +
                                       std::to_string(v.cols()));
  }
  return v(0, 0);
}

Var Tape::constant(Matrix value) {
  nodes_.push_back(Node{std::move(value), {}, {}, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& p) {
  Node n{p.value, {}, {}, grad_enabled_};
  if (grad_enabled_) {
    Parameter* target = &p;
    n.adjoint = [target](Tape& tape, std::size_t self) { target->grad += tape.grad(self); };
  }
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::gather_rows(Parameter& p, std::span<const Eigen::Index> rows) {
  Matrix value(static_cast<Eigen::Index>(rows.size()), p.value.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= p.value.rows()) {
      throw Error(ErrorCode::kShape, "gather_rows: row " + std::to_string(rows[i]) +
                                         " outside " + std::to_string(p.value.rows()) + " rows");
    }
    value.row(static_cast<Eigen::Index>(i)) = p.value.row(rows[i]);
  }
  Node n{std::move(value), {}, {}, grad_enabled_};
  if (grad_enabled_) {
    Parameter* target = &p;
    std::vector<Eigen::Index> idx(rows.begin(), rows.end());
    n.adjoint = [target, idx = std::move(idx)](Tape& tape, std::size_t self) {
      const Matrix& g = tape.grad(self);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        target->grad.row(idx[i]) += g.row(static_cast<Eigen::Index>(i));
      }
    };
  }
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Matrix value, std::initializer_list<Var> inputs, Adjoint adjoint) {
  return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(adjoint));
}

Var Tape::record(Matrix value, std::span<const Var> inputs, Adjoint adjoint) {
  bool needs = false;
  if (grad_enabled_) {
    for (const Var& in : inputs) {
      if (in.tape_ != this) throw Error(ErrorCode::kInvalidArgument, "operand from another tape");
      needs = needs || nodes_[in.id_].requires_grad;
    }
  }
  Node n{std::move(value), {}, {}, needs};
  if (needs) n.adjoint = std::move(adjoint);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Matrix& Tape::grad(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() == 0) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::backward(Var output) {
  if (output.tape_ != this) throw Error(ErrorCode::kInvalidArgument, "backward on a foreign Var");
  const Matrix& v = nodes_[output.id_].value;
  if (v.rows() != 1 || v.cols() != 1) {
    throw Error(ErrorCode::kShape, "backward needs a 1x1 output, got " +
                                       std::to_string(v.rows()) + "x" + std::to_string(v.cols()));
  }
  if (!nodes_[output.id_].requires_grad) return;
  grad(output.id_).setConstant(1.0);
  for (std::size_t i = output.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.adjoint && n.grad.size() != 0) n.adjoint(*this, i);
  }
}

void Tape::clear() { nodes_.clear(); }

}  // namespace rete::num
