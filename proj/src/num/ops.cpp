#include "rete/num/ops.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rete/error.hpp"

namespace rete::num {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void shape_error(std::string_view op, const Matrix& a, const Matrix& b) {
  throw Error(ErrorCode::kShape, std::string(op) + ": incompatible shapes " + shape(a) + " and " + shape(b));
}

void require_same_shape(std::string_view op, Var a, Var b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_error(op, a.value(), b.value());
}

void require_scalar(std::string_view op, Var s) {
  if (s.rows() != 1 || s.cols() != 1) {
    throw Error(ErrorCode::kShape, std::string(op) + ": expected a 1x1 operand, got " + shape(s.value()));
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) shape_error("matmul", a.value(), b.value());
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(a.value() * b.value(), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.requires_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

Var add(Var a, Var b) {
  require_same_shape("add", a, b);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(a.value() + b.value(), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self));
    t.accumulate(ib, t.grad(self));
  });
}

Var sub(Var a, Var b) {
  require_same_shape("sub", a, b);
  const std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(a.value() - b.value(), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self));
    t.accumulate(ib, -t.grad(self));
  });
}

Var scale(Var a, double c) {
  const std::size_t ia = a.id();
  return a.tape().record(c * a.value(), {a}, [ia, c](Tape& t, std::size_t self) {
    t.accumulate(ia, c * t.grad(self));
  });
}

Var add_scalar(Var a, Var s) {
  require_scalar("add_scalar", s);
  const std::size_t ia = a.id(), is = s.id();
  Matrix out = a.value().array() + s.scalar();
  return a.tape().record(std::move(out), {a, s}, [ia, is](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    t.accumulate(ia, g);
    if (t.requires_grad(is)) t.accumulate(is, Matrix::Constant(1, 1, g.sum()));
  });
}

Var add_scalar(Var a, double s) {
  const std::size_t ia = a.id();
  Matrix out = a.value().array() + s;
  return a.tape().record(std::move(out), {a}, [ia](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self));
  });
}

Var hadamard(Var a, Var b) {
  require_same_shape("hadamard", a, b);
  const std::size_t ia = a.id(), ib = b.id();
  Matrix out = a.value().cwiseProduct(b.value());
  return a.tape().record(std::move(out), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g.cwiseProduct(t.value(ib)));
    if (t.requires_grad(ib)) t.accumulate(ib, g.cwiseProduct(t.value(ia)));
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw Error(ErrorCode::kShape, "concat_cols: no operands");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != rows) shape_error("concat_cols", parts.front().value(), p.value());
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<std::size_t> ids;
  std::vector<Eigen::Index> widths;
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
    ids.push_back(p.id());
    widths.push_back(p.cols());
  }
  return parts.front().tape().record(std::move(out), parts,
                                     [ids, widths](Tape& t, std::size_t self) {
                                       const Matrix& g = t.grad(self);
                                       Eigen::Index at = 0;
                                       for (std::size_t k = 0; k < ids.size(); ++k) {
                                         t.accumulate(ids[k], g.middleCols(at, widths[k]));
                                         at += widths[k];
                                       }
                                     });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw Error(ErrorCode::kShape, "concat_rows: no operands");
  const Eigen::Index cols = parts.front().cols();
  Eigen::Index rows = 0;
  for (const Var& p : parts) {
    if (p.cols() != cols) shape_error("concat_rows", parts.front().value(), p.value());
    rows += p.rows();
  }
  Matrix out(rows, cols);
  std::vector<std::size_t> ids;
  std::vector<Eigen::Index> heights;
  Eigen::Index at = 0;
  for (const Var& p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
    ids.push_back(p.id());
    heights.push_back(p.rows());
  }
  return parts.front().tape().record(std::move(out), parts,
                                     [ids, heights](Tape& t, std::size_t self) {
                                       const Matrix& g = t.grad(self);
                                       Eigen::Index at = 0;
                                       for (std::size_t k = 0; k < ids.size(); ++k) {
                                         t.accumulate(ids[k], g.middleRows(at, heights[k]));
                                         at += heights[k];
                                       }
                                     });
}

Var transpose(Var a) {
  const std::size_t ia = a.id();
  return a.tape().record(a.value().transpose(), {a}, [ia](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self).transpose());
  });
}

Var row(Var a, Eigen::Index i) {
  if (i < 0 || i >= a.rows()) {
    throw Error(ErrorCode::kShape, "row: index " + std::to_string(i) + " outside " + shape(a.value()));
  }
  const std::size_t ia = a.id();
  return a.tape().record(a.value().row(i), {a}, [ia, i](Tape& t, std::size_t self) {
    if (t.requires_grad(ia)) t.grad(ia).row(i) += t.grad(self);
  });
}

Var top_rows(Var a, Eigen::Index n) {
  if (n < 1 || n > a.rows()) {
    throw Error(ErrorCode::kShape, "top_rows: " + std::to_string(n) + " rows of " + shape(a.value()));
  }
  const std::size_t ia = a.id();
  return a.tape().record(a.value().topRows(n), {a}, [ia, n](Tape& t, std::size_t self) {
    if (t.requires_grad(ia)) t.grad(ia).topRows(n) += t.grad(self);
  });
}

Var select_rows(Var a, std::span<const Eigen::Index> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= a.rows()) {
      throw Error(ErrorCode::kShape, "select_rows: index " + std::to_string(rows[k]) + " outside " +
                                         shape(a.value()));
    }
    out.row(static_cast<Eigen::Index>(k)) = a.value().row(rows[k]);
  }
  const std::size_t ia = a.id();
  std::vector<Eigen::Index> idx(rows.begin(), rows.end());
  return a.tape().record(std::move(out), {a}, [ia, idx = std::move(idx)](Tape& t, std::size_t self) {
    if (!t.requires_grad(ia)) return;
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad(ia);
    for (std::size_t k = 0; k < idx.size(); ++k) ga.row(idx[k]) += g.row(static_cast<Eigen::Index>(k));
  });
}

Var outer_sum(Var col, Var row_vec) {
  if (col.cols() != 1 || row_vec.rows() != 1) shape_error("outer_sum", col.value(), row_vec.value());
  Matrix out = col.value().replicate(1, row_vec.cols()) + row_vec.value().replicate(col.rows(), 1);
  const std::size_t ic = col.id(), ir = row_vec.id();
  return col.tape().record(std::move(out), {col, row_vec}, [ic, ir](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ic)) t.accumulate(ic, g.rowwise().sum());
    if (t.requires_grad(ir)) t.accumulate(ir, g.colwise().sum());
  });
}

Var masked_softmax_rows(Var a) {
  const Matrix& x = a.value();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double peak = kNegInf;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) != kNegInf) peak = std::max(peak, x(i, j));
    }
    if (peak == kNegInf) {
      throw Error(ErrorCode::kNumeric, "masked_softmax_rows: row " + std::to_string(i) + " is fully masked");
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) != kNegInf) {
        y(i, j) = std::exp(x(i, j) - peak);
        total += y(i, j);
      }
    }
    y.row(i) /= total;
  }
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {a}, [ia](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& y = t.value(self);
    Eigen::VectorXd inner = g.cwiseProduct(y).rowwise().sum();
    Matrix dx = y.cwiseProduct(g - inner.replicate(1, g.cols()));
    t.accumulate(ia, dx);
  });
}

Var leaky_relu(Var a, double slope) {
  Matrix y = a.value().unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {a}, [ia, slope](Tape& t, std::size_t self) {
    Matrix d = t.value(ia).unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; });
    t.accumulate(ia, t.grad(self).cwiseProduct(d));
  });
}

Var tanh(Var a) {
  Matrix y = a.value().array().tanh().matrix();
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {a}, [ia](Tape& t, std::size_t self) {
    const Matrix& y = t.value(self);
    t.accumulate(ia, t.grad(self).cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

Var hinge(Var a) {
  Matrix y = a.value().cwiseMax(0.0);
  const std::size_t ia = a.id();
  return a.tape().record(std::move(y), {a}, [ia](Tape& t, std::size_t self) {
    Matrix d = t.value(ia).unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    t.accumulate(ia, t.grad(self).cwiseProduct(d));
  });
}

Var mean_rows(Var a) {
  const Eigen::Index n = a.rows();
  if (n == 0) throw Error(ErrorCode::kShape, "mean_rows: no rows");
  const std::size_t ia = a.id();
  Matrix out = a.value().colwise().mean();
  return a.tape().record(std::move(out), {a}, [ia, n](Tape& t, std::size_t self) {
    t.accumulate(ia, t.grad(self).replicate(n, 1) / static_cast<double>(n));
  });
}

Var sum(Var a) {
  const std::size_t ia = a.id();
  const Eigen::Index r = a.rows(), c = a.cols();
  return a.tape().record(Matrix::Constant(1, 1, a.value().sum()), {a},
                         [ia, r, c](Tape& t, std::size_t self) {
                           t.accumulate(ia, Matrix::Constant(r, c, t.grad(self)(0, 0)));
                         });
}

Var dot(Var a, Var b) {
  require_same_shape("dot", a, b);
  const std::size_t ia = a.id(), ib = b.id();
  const double v = a.value().cwiseProduct(b.value()).sum();
  return a.tape().record(Matrix::Constant(1, 1, v), {a, b}, [ia, ib](Tape& t, std::size_t self) {
    const double g = t.grad(self)(0, 0);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib));
    if (t.requires_grad(ib)) t.accumulate(ib, g * t.value(ia));
  });
}

Var squared_norm(Var a) {
  const std::size_t ia = a.id();
  return a.tape().record(Matrix::Constant(1, 1, a.value().squaredNorm()), {a},
                         [ia](Tape& t, std::size_t self) {
                           t.accumulate(ia, 2.0 * t.grad(self)(0, 0) * t.value(ia));
                         });
}

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::kTanh: return "tanh";
    case Activation::kLeakyRelu: return "leaky_relu";
    case Activation::kIdentity: return "identity";
  }
  return "unknown";
}

Activation parse_activation(std::string_view text) {
  if (text == "tanh") return Activation::kTanh;
  if (text == "leaky_relu") return Activation::kLeakyRelu;
  if (text == "identity") return Activation::kIdentity;
  throw Error(ErrorCode::kConfig, "unknown activation '" + std::string(text) + "'");
}

Var activate(Var a, Activation act, double slope) {
  switch (act) {
    case Activation::kTanh: return tanh(a);
    case Activation::kLeakyRelu: return leaky_relu(a, slope);
    case Activation::kIdentity: return a;
  }
  return a;
}

}  // namespace rete::num
