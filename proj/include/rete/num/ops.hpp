#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "rete/num/tape.hpp"

namespace rete::num {

// Differentiable primitives. Every function records its result on the tape
// of its operands and registers the matching adjoint. Shape mismatches throw
// Error(kShape) naming the operation and both shapes.

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var scale(Var a, double c);
/// Adds a 1x1 value to every entry of `a`.
Var add_scalar(Var a, Var s);
Var add_scalar(Var a, double s);
Var hadamard(Var a, Var b);

Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var transpose(Var a);
Var row(Var a, Eigen::Index i);
Var top_rows(Var a, Eigen::Index n);
Var select_rows(Var a, std::span<const Eigen::Index> rows);
/// out(i, j) = col(i, 0) + row_vec(0, j).
Var outer_sum(Var col, Var row_vec);

/// Row-wise softmax; -inf entries are masked and receive weight 0.
/// A row with every entry masked is an error.
Var masked_softmax_rows(Var a);
Var leaky_relu(Var a, double slope = 0.2);
Var tanh(Var a);
/// Elementwise max(0, x).
Var hinge(Var a);

/// Column-wise mean over the rows: 1 x cols.
Var mean_rows(Var a);
Var sum(Var a);
/// Frobenius inner product of two equally shaped values, 1x1.
Var dot(Var a, Var b);
Var squared_norm(Var a);

enum class Activation { kTanh, kLeakyRelu, kIdentity };

std::string_view to_string(Activation act);
Activation parse_activation(std::string_view text);
Var activate(Var a, Activation act, double slope = 0.2);

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return matmul(a, b); }
inline Var operator*(double c, Var a) { return scale(a, c); }
inline Var operator*(Var a, double c) { return scale(a, c); }

}  // namespace rete::num
