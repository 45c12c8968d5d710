#include "rete/num/parameters.hpp"

#include <fstream>

#include "rete/binary_io.hpp"
#include "rete/error.hpp"

namespace rete::num {

Parameter& ParameterStore::add(std::string name, Matrix init) {
  if (contains(name)) throw Error(ErrorCode::kInvalidArgument, "parameter '" + name + "' already exists");
  Matrix grad = Matrix::Zero(init.rows(), init.cols());
  auto [it, _] = params_.emplace(std::move(name), Parameter{std::move(init), std::move(grad)});
  return it->second;
}

Parameter& ParameterStore::at(std::string_view name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error(ErrorCode::kInvalidArgument, "unknown parameter '" + std::string(name) + "'");
  return it->second;
}

const Parameter& ParameterStore::at(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error(ErrorCode::kInvalidArgument, "unknown parameter '" + std::string(name) + "'");
  return it->second;
}

void ParameterStore::zero_grad() {
  for (auto& [_, p] : params_) p.grad.setZero(p.value.rows(), p.value.cols());
}

std::size_t ParameterStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& [_, p] : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

std::vector<std::string> ParameterStore::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : params_) out.push_back(name);
  return out;
}

bool ParameterStore::same_values(const ParameterStore& other) const {
  if (params_.size() != other.params_.size()) return false;
  auto a = params_.begin();
  auto b = other.params_.begin();
  for (; a != params_.end(); ++a, ++b) {
    if (a->first != b->first) return false;
    if (a->second.value.rows() != b->second.value.rows() ||
        a->second.value.cols() != b->second.value.cols() ||
        a->second.value != b->second.value) {
      return false;
    }
  }
  return true;
}

Matrix xavier_uniform(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

namespace {
constexpr char kMagic[8] = {'R', 'E', 'T', 'E', 'P', 'R', 'M', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_parameters(const ParameterStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& [name, p] : store) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(p.value.rows()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(p.value.cols()));
    for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < p.value.cols(); ++j) put_f64(out, p.value(i, j));
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

ParameterStore load_parameters(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "missing '" + path.string() + "'");
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) {
    throw Error(ErrorCode::kFormat, "'" + path.string() + "' is not a parameter checkpoint");
  }
  if (auto version = get_le<std::uint32_t>(in); version != kVersion) {
    throw Error(ErrorCode::kFormat, "unsupported checkpoint version " + std::to_string(version));
  }
  ParameterStore store;
  const auto count = get_le<std::uint32_t>(in);
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name(get_le<std::uint32_t>(in), '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size()))) {
      throw Error(ErrorCode::kFormat, "checkpoint truncated");
    }
    const auto rows = static_cast<Eigen::Index>(get_le<std::uint64_t>(in));
    const auto cols = static_cast<Eigen::Index>(get_le<std::uint64_t>(in));
    Matrix value(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) value(i, j) = get_f64(in);
    }
    store.add(std::move(name), std::move(value));
  }
  return store;
}

}  // namespace rete::num
