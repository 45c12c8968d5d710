#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rete::num {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// A trainable tensor and its gradient buffer (same shape).
struct Parameter {
  Matrix value;
  Matrix grad;
};

/// Named trainable tensors, iterated in name order.
class ParameterStore {
 public:
  using Map = std::map<std::string, Parameter, std::less<>>;

  /// Throws if `name` exists.
  Parameter& add(std::string name, Matrix init);
  Parameter& at(std::string_view name);
  const Parameter& at(std::string_view name) const;
  bool contains(std::string_view name) const { return params_.find(name) != params_.end(); }

  void zero_grad();
  std::size_t size() const { return params_.size(); }
  std::size_t num_scalars() const;
  std::vector<std::string> names() const;

  Map::iterator begin() { return params_.begin(); }
  Map::iterator end() { return params_.end(); }
  Map::const_iterator begin() const { return params_.begin(); }
  Map::const_iterator end() const { return params_.end(); }

  /// Values equal (gradients ignored).
  bool same_values(const ParameterStore& other) const;

 private:
  Map params_;
};

/// Uniform(-a, a) with a = sqrt(6 / (rows + cols)).
Matrix xavier_uniform(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Checkpoint: "RETEPRM1" magic, u32 version, u32 tensor count, then per
/// tensor u32 name length, name bytes, u64 rows, u64 cols and rows*cols
/// little-endian f64 values in row-major order.
void save_parameters(const ParameterStore& store, const std::filesystem::path& path);
ParameterStore load_parameters(const std::filesystem::path& path);

}  // namespace rete::num
