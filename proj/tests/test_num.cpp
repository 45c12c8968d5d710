#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>

#include "rete/error.hpp"
#include "rete/num/adam.hpp"
#include "rete/num/grad_check.hpp"
#include "rete/num/ops.hpp"
#include "support.hpp"

using namespace rete;
using namespace rete::num;
using rete::testing::random_matrix;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Entries pushed at least `gap` away from zero so hinge and leaky kinks are avoided.
Matrix away_from_zero(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double gap = 0.1) {
  Matrix m = random_matrix(r, c, rng);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    double& x = m.data()[i];
    x = x < 0 ? x - gap : x + gap;
  }
  return m;
}

Eigen::Index dim(std::mt19937_64& rng) { return 1 + static_cast<Eigen::Index>(rng() % 16); }

/// Squared-norm readout with fixed random weights so every output entry matters.
Var readout(Tape& t, Var x, const Matrix& w) { return dot(x, t.constant(w)); }

}  // namespace

TEST_CASE("forward: masked softmax annihilates masked entries") {
  Tape t;
  for (double x : {-30.0, 0.0, 2.5, 700.0}) {
    Matrix m(1, 2);
    m << x, -kInf;
    const Matrix y = masked_softmax_rows(t.constant(m)).value();
    CHECK(y(0, 0) == 1.0);
    CHECK(y(0, 1) == 0.0);
  }
  Matrix c = Matrix::Constant(1, 3, 4.2);
  const Matrix y = masked_softmax_rows(t.constant(c)).value();
  for (int j = 0; j < 3; ++j) CHECK(y(0, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("forward: fully masked row is rejected") {
  Tape t;
  Matrix m(2, 2);
  m << 0.0, 1.0, -kInf, -kInf;
  CHECK_THROWS_AS(masked_softmax_rows(t.constant(m)), Error);
}

TEST_CASE("forward: softmax rows sum to one on random masks") {
  std::mt19937_64 rng(1);
  Tape t;
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = dim(rng), c = dim(rng);
    Matrix m = random_matrix(r, c, rng, 5.0);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) {
        if (rng() % 3 == 0) m(i, j) = -kInf;
      }
      m(i, static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(c))) = 0.5;
    }
    const Matrix y = masked_softmax_rows(t.constant(m)).value();
    for (Eigen::Index i = 0; i < r; ++i) CHECK(std::abs(y.row(i).sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("forward: identity product and basic values") {
  std::mt19937_64 rng(2);
  Tape t;
  const Matrix a = random_matrix(4, 4, rng);
  CHECK((Matrix::Identity(4, 4) * a).isApprox(a));
  CHECK(matmul(t.constant(Matrix::Identity(4, 4)), t.constant(a)).value() == a);
  CHECK(transpose(t.constant(a)).value() == a.transpose());
  CHECK(sum(t.constant(a)).scalar() == doctest::Approx(a.sum()).epsilon(1e-14));
  CHECK(squared_norm(t.constant(a)).scalar() == doctest::Approx(a.squaredNorm()).epsilon(1e-14));
  const Matrix col = random_matrix(3, 1, rng), rowv = random_matrix(1, 5, rng);
  const Matrix o = outer_sum(t.constant(col), t.constant(rowv)).value();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) CHECK(o(i, j) == col(i, 0) + rowv(0, j));
  }
  Matrix l(1, 2);
  l << -2.0, 3.0;
  const Matrix lr = leaky_relu(t.constant(l), 0.2).value();
  CHECK(lr(0, 0) == -0.4);
  CHECK(lr(0, 1) == 3.0);
  CHECK(hinge(t.constant(l)).value()(0, 0) == 0.0);
}

TEST_CASE("forward: shape errors name the operation") {
  Tape t;
  try {
    matmul(t.constant(Matrix::Zero(2, 3)), t.constant(Matrix::Zero(2, 3)));
    FAIL("expected a shape error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShape);
    CHECK(std::string(e.what()).find("matmul") != std::string::npos);
  }
  CHECK_THROWS_AS(add(t.constant(Matrix::Zero(2, 3)), t.constant(Matrix::Zero(3, 2))), Error);
  CHECK_THROWS_AS(top_rows(t.constant(Matrix::Zero(2, 3)), 3), Error);
}

TEST_CASE("grad_check: quadratic is exact") {
  std::mt19937_64 rng(3);
  ParameterStore store;
  store.add("theta", random_matrix(5, 3, rng));
  const auto result = grad_check([&](Tape& t) { return squared_norm(t.parameter(store.at("theta"))); }, store);
  CHECK(result.checked == 15);
  CHECK(result.max_error < 1e-9);
  store.zero_grad();
  Tape t;
  t.backward(squared_norm(t.parameter(store.at("theta"))));
  CHECK(store.at("theta").grad.isApprox(2.0 * store.at("theta").value, 1e-15));
}

TEST_CASE("grad_check: every primitive on random shapes") {
  std::mt19937_64 rng(4);
  using Build = std::function<Var(Tape&, ParameterStore&, std::mt19937_64&)>;
  struct Case {
    const char* name;
    Build build;
  };
  // Each case draws its own shapes, registers parameters and returns a scalar.
  const Case cases[] = {
      {"matmul", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         const auto r = dim(g), k = dim(g), c = dim(g);
         if (!s.contains("A")) {
           s.add("A", random_matrix(r, k, g));
           s.add("B", random_matrix(k, c, g));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, matmul(t.parameter(s.at("A")), t.parameter(s.at("B"))), s.at("W").value);
       }},
      {"add/sub/scale", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", random_matrix(r, c, g));
           s.add("B", random_matrix(r, c, g));
           s.add("W", random_matrix(r, c, g));
         }
         const Var a = t.parameter(s.at("A")), b = t.parameter(s.at("B"));
         return readout(t, add(a, scale(sub(a, b), -1.7)), s.at("W").value);
       }},
      {"add_scalar", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", random_matrix(r, c, g));
           s.add("s", random_matrix(1, 1, g));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, add_scalar(add_scalar(t.parameter(s.at("A")), t.parameter(s.at("s"))), 0.3),
                        s.at("W").value);
       }},
      {"hadamard", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", random_matrix(r, c, g));
           s.add("B", random_matrix(r, c, g));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, hadamard(t.parameter(s.at("A")), t.parameter(s.at("B"))), s.at("W").value);
       }},
      {"concat", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c1 = dim(g), c2 = dim(g);
           s.add("A", random_matrix(r, c1, g));
           s.add("B", random_matrix(r, c2, g));
           s.add("W", random_matrix(2 * r, c1 + c2, g));
         }
         const Var cols[] = {t.parameter(s.at("A")), t.parameter(s.at("B"))};
         const Var joined = concat_cols(cols);
         const Var rows[] = {joined, scale(joined, 0.5)};
         return readout(t, concat_rows(rows), s.at("W").value);
       }},
      {"transpose/row/top_rows/select_rows", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = 2 + dim(g) / 2, c = dim(g);
           s.add("A", random_matrix(r, c, g));
           s.add("W", random_matrix(c, 1, g));
           s.add("V", random_matrix(3, c, g));
         }
         const Var a = t.parameter(s.at("A"));
         const Eigen::Index pick[] = {1, 0, 1};
         const Var x = add(sum(matmul(row(a, 1), t.constant(s.at("W").value))),
                           dot(select_rows(top_rows(a, 2), pick), t.constant(s.at("V").value)));
         return add(x, squared_norm(transpose(a)));
       }},
      {"outer_sum", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("c")) {
           const auto r = dim(g), c = dim(g);
           s.add("c", random_matrix(r, 1, g));
           s.add("r", random_matrix(1, c, g));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, outer_sum(t.parameter(s.at("c")), t.parameter(s.at("r"))), s.at("W").value);
       }},
      {"masked_softmax_rows", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", random_matrix(r, c, g, 2.0));
           Matrix mask = Matrix::Zero(r, c);
           for (Eigen::Index i = 0; i < r; ++i) {
             for (Eigen::Index j = 1; j < c; ++j) {
               if (g() % 3 == 0) mask(i, j) = -kInf;
             }
           }
           s.add("M", mask);
           s.add("W", random_matrix(r, c, g));
         }
         const Var z = add(t.parameter(s.at("A")), t.constant(s.at("M").value));
         return readout(t, masked_softmax_rows(z), s.at("W").value);
       }},
      {"leaky_relu", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", away_from_zero(r, c, g));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, leaky_relu(t.parameter(s.at("A")), 0.2), s.at("W").value);
       }},
      {"tanh", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", random_matrix(r, c, g, 2.0));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, num::tanh(t.parameter(s.at("A"))), s.at("W").value);
       }},
      {"hinge", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", away_from_zero(r, c, g));
           s.add("W", random_matrix(r, c, g));
         }
         return readout(t, hinge(t.parameter(s.at("A"))), s.at("W").value);
       }},
      {"mean_rows/sum/dot/squared_norm", [](Tape& t, ParameterStore& s, std::mt19937_64& g) {
         if (!s.contains("A")) {
           const auto r = dim(g), c = dim(g);
           s.add("A", random_matrix(r, c, g));
           s.add("B", random_matrix(r, c, g));
         }
         const Var a = t.parameter(s.at("A")), b = t.parameter(s.at("B"));
         return add(add(sum(mean_rows(a)), dot(a, b)), squared_norm(b));
       }},
  };
  for (const Case& c : cases) {
    for (int trial = 0; trial < 5; ++trial) {
      ParameterStore store;
      const auto f = [&](Tape& t) { return c.build(t, store, rng); };
      {
        Tape probe;
        f(probe);
      }
      std::vector<std::string> inputs;
      for (const std::string& name : store.names()) {
        if (name != "W" && name != "V" && name != "M") inputs.push_back(name);
      }
      const auto result = grad_check(f, store, 1e-6, inputs);
      CAPTURE(std::string(c.name));
      CAPTURE(result.worst_parameter);
      CHECK(result.max_error < 1e-5);
    }
  }
}

TEST_CASE("tape: gather_rows scatters gradients and constants stay inert") {
  std::mt19937_64 rng(5);
  ParameterStore store;
  store.add("X", random_matrix(5, 3, rng));
  Tape t;
  const Eigen::Index rows[] = {4, 1, 4};
  const Var g = t.gather_rows(store.at("X"), rows);
  t.backward(sum(g));
  const Matrix& grad = store.at("X").grad;
  CHECK(grad.row(4).isApprox(Eigen::RowVectorXd::Constant(3, 2.0)));
  CHECK(grad.row(1).isApprox(Eigen::RowVectorXd::Constant(3, 1.0)));
  CHECK(grad.row(0).isZero());

  Tape c;
  const Var k = c.constant(random_matrix(2, 2, rng));
  CHECK_FALSE(c.requires_grad(squared_norm(k).id()));
}

TEST_CASE("tape: replay is bitwise deterministic") {
  std::mt19937_64 rng(6);
  const Matrix a = random_matrix(7, 5, rng), b = random_matrix(5, 7, rng);
  auto run = [&] {
    Tape t;
    return masked_softmax_rows(num::tanh(matmul(t.constant(a), t.constant(b)))).value();
  };
  CHECK(run() == run());
}

TEST_CASE("adam: first step matches the closed form") {
  ParameterStore store;
  Matrix init(1, 3);
  init << 1.0, -2.0, 0.5;
  store.add("w", init);
  store.add("frozen", init);
  Matrix grad(1, 3);
  grad << 0.3, -4.0, 0.0;
  store.at("w").grad = grad;
  store.at("frozen").grad = grad;
  AdamConfig cfg;
  cfg.lr = 0.1;
  Adam adam(cfg, [](std::string_view name) { return name == "w"; });
  adam.step(store);
  // bias-corrected first step: m_hat = g, v_hat = g^2
  for (int j = 0; j < 3; ++j) {
    const double g = grad(0, j);
    const double expected = init(0, j) - cfg.lr * g / (std::abs(g) + cfg.eps);
    CHECK(store.at("w").value(0, j) == doctest::Approx(expected).epsilon(1e-14));
  }
  CHECK(store.at("frozen").value == init);
  CHECK(adam.steps() == 1);
}

TEST_CASE("adam: minimises a quadratic") {
  ParameterStore store;
  store.add("w", Matrix::Constant(2, 2, 3.0));
  AdamConfig cfg;
  cfg.lr = 0.05;
  Adam adam(cfg);
  for (int i = 0; i < 2000; ++i) {
    store.zero_grad();
    Tape t;
    t.backward(squared_norm(t.parameter(store.at("w"))));
    adam.step(store);
  }
  CHECK(store.at("w").value.cwiseAbs().maxCoeff() < 1e-2);
}

TEST_CASE("checkpoint: round-trip and corrupt files") {
  std::mt19937_64 rng(7);
  ParameterStore store;
  store.add("X", random_matrix(4, 3, rng));
  store.add("gat.0.W_Q", random_matrix(3, 3, rng));
  const auto path = std::filesystem::temp_directory_path() / "rete_test_ckpt.bin";
  save_parameters(store, path);
  CHECK(load_parameters(path).same_values(store));
  {
    std::ofstream out(path, std::ios::binary);
    out << "garbage";
  }
  CHECK_THROWS_AS(load_parameters(path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_parameters(path), Error);
}

TEST_CASE("activations parse and print") {
  for (Activation a : {Activation::kTanh, Activation::kLeakyRelu, Activation::kIdentity}) {
    CHECK(parse_activation(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_activation("relu6"), Error);
}
