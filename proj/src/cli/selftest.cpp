#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <set>

#include "rete/cli/commands.hpp"
#include "rete/eval/metrics.hpp"
#include "rete/model/layers.hpp"
#include "rete/num/grad_check.hpp"
#include "rete/num/ops.hpp"
#include "rete/sampler/ppr.hpp"
#include "rete/train/losses.hpp"

namespace rete {

namespace {

using num::Matrix;

AdjacencyIndex random_connected_graph(std::size_t n, std::mt19937_64& rng) {
  std::vector<EdgeRecord> edges;
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::uint32_t> parent(0, v - 1);
    edges.push_back({EntityId{parent(rng)}, EntityId{v}, RelationId{0}});
  }
  std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t k = 0; k < n; ++k) edges.push_back({EntityId{any(rng)}, EntityId{any(rng)}, RelationId{0}});
  return AdjacencyIndex::from_edges(n, edges);
}

bool check_ppr(std::mt19937_64& rng) {
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 29;
    const AdjacencyIndex adj = random_connected_graph(n, rng);
    PprConfig cfg;
    cfg.eps = 1e-6;
    const EntityId seed{static_cast<std::uint32_t>(rng() % n)};
    Eigen::RowVectorXd pi = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::RowVectorXd e = pi;
    e(seed.value) = 1.0;
    for (int it = 0; it < 100000; ++it) {
      Eigen::RowVectorXd next = cfg.alpha * e;
      for (std::uint32_t u = 0; u < n; ++u) {
        const double share = (1.0 - cfg.alpha) * pi(u) / static_cast<double>(adj.degree(EntityId{u}));
        for (const Neighbor& nb : adj.neighbors(EntityId{u})) next(nb.node.value) += share;
      }
      const double delta = (next - pi).cwiseAbs().maxCoeff();
      pi = next;
      if (delta < 1e-13) break;
    }
    Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const auto& [id, score] : approx_ppr(adj, seed, cfg)) p(id.value) = score;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (std::abs(p(v) - pi(v)) > cfg.eps * static_cast<double>(adj.degree(EntityId{v}))) return false;
    }
  }
  return true;
}

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

bool check_gradients(std::mt19937_64& rng) {
  num::ParameterStore store;
  store.add("A", random_matrix(3, 4, rng));
  store.add("B", random_matrix(4, 3, rng));
  store.add("C", random_matrix(3, 3, rng));
  using F = std::function<num::Var(num::Tape&)>;
  auto A = [&](num::Tape& t) { return t.parameter(store.at("A")); };
  auto B = [&](num::Tape& t) { return t.parameter(store.at("B")); };
  auto C = [&](num::Tape& t) { return t.parameter(store.at("C")); };
  const std::vector<F> cases = {
      [&](num::Tape& t) { return num::squared_norm(A(t) * B(t)); },
      [&](num::Tape& t) { return num::sum(num::tanh(A(t) * B(t) + C(t))); },
      [&](num::Tape& t) { return num::dot(num::masked_softmax_rows(C(t)), C(t)); },
      [&](num::Tape& t) { return num::squared_norm(num::mean_rows(num::leaky_relu(C(t), 0.2))); },
      [&](num::Tape& t) {
        const num::Var parts[] = {A(t), num::transpose(B(t))};
        return num::squared_norm(num::concat_cols(parts));
      },
  };
  for (const F& f : cases) {
    if (num::grad_check(f, store).max_error >= 1e-5) return false;
  }
  return true;
}

bool check_softmax(std::mt19937_64& rng) {
  num::Tape tape;
  Matrix x = random_matrix(6, 6, rng);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = i + 1; j < 6; ++j) x(i, j) = -std::numeric_limits<double>::infinity();
  }
  const Matrix y = num::masked_softmax_rows(tape.constant(x)).value();
  for (Eigen::Index i = 0; i < 6; ++i) {
    if (std::abs(y.row(i).sum() - 1.0) > 1e-12) return false;
  }
  return true;
}

bool check_metrics(std::mt19937_64& rng) {
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EntityId> ranked;
    for (std::uint32_t i = 0; i < 20; ++i) ranked.push_back(EntityId{i});
    std::shuffle(ranked.begin(), ranked.end(), rng);
    std::set<EntityId> truth;
    const std::size_t size = 1 + rng() % 8;
    while (truth.size() < size) truth.insert(EntityId{static_cast<std::uint32_t>(rng() % 20)});
    const std::vector<EntityId> truth_list(truth.begin(), truth.end());
    const std::size_t k = 1 + rng() % 20;
    double hits = 0.0, dcg = 0.0, idcg = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (truth.count(ranked[i])) {
        hits += 1.0;
        dcg += 1.0 / std::log2(static_cast<double>(i + 2));
      }
      if (i < truth.size()) idcg += 1.0 / std::log2(static_cast<double>(i + 2));
    }
    if (recall_at_k(ranked, truth_list, k) != hits / static_cast<double>(truth.size())) return false;
    if (std::abs(ndcg_at_k(ranked, truth_list, k) - dcg / idcg) > 1e-12) return false;
  }
  return true;
}

bool check_warp() {
  const double a[] = {0.4};
  const double b[] = {0.5, 1.2};
  const double c[] = {0.0, 0.0};
  return warp_loss(1.0, a, 0.5) == 0.0 && std::abs(warp_loss(1.0, b, 0.5) - 0.7) < 1e-12 &&
         std::abs(warp_loss(0.0, c, 0.5) - 0.75) < 1e-12;
}

bool check_causality(std::mt19937_64& rng) {
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index steps = 2 + static_cast<Eigen::Index>(rng() % 7);
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng() % 8);
    const Eigen::Index j = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(steps - 1));
    num::Tape tape;
    TemporalWeights w{tape.constant(random_matrix(d, d, rng)), tape.constant(random_matrix(d, d, rng)),
                      tape.constant(random_matrix(d, d, rng))};
    Matrix h = random_matrix(steps, d, rng);
    const Matrix before = temporal_attention(tape.constant(h), w, j).next.value();
    h.bottomRows(steps - j) = random_matrix(steps - j, d, rng);
    const Matrix after = temporal_attention(tape.constant(h), w, j).next.value();
    if (before != after) return false;
  }
  return true;
}

}  // namespace

bool cmd_selftest(std::ostream& log) {
  std::mt19937_64 rng(20240601);
  const std::pair<const char*, std::function<bool()>> checks[] = {
      {"ppr forward push vs power iteration", [&] { return check_ppr(rng); }},
      {"reverse-mode gradients vs finite differences", [&] { return check_gradients(rng); }},
      {"masked softmax normalisation", [&] { return check_softmax(rng); }},
      {"recall/ndcg vs direct count", [&] { return check_metrics(rng); }},
      {"warp loss reference values", [] { return check_warp(); }},
      {"temporal attention causality", [&] { return check_causality(rng); }},
  };
  bool all = true;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    try {
      ok = check();
    } catch (const std::exception& e) {
      log << "error in " << name << ": " << e.what() << "\n";
    }
    log << (ok ? "ok   " : "FAIL ") << name << "\n";
    all = all && ok;
  }
  return all;
}

}  // namespace rete
