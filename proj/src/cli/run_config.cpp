#include "rete/cli/run_config.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "rete/error.hpp"
#include "rete/text.hpp"
#include "rete/tkg/ingest.hpp"

namespace rete {

namespace {

template <class T>
T number(std::string_view value, std::string_view key) {
  try {
    return parse_number<T>(value, key);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
}

bool boolean(std::string_view value, std::string_view key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::kConfig, std::string(key) + ": expected true or false, got '" + std::string(value) + "'");
}

std::string str(bool v) { return v ? "true" : "false"; }
std::string str(double v) { return format_double(v); }
template <class T>
  requires std::is_integral_v<T>
std::string str(T v) {
  return std::to_string(v);
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

#define RETE_FIELD(name, expr, type)                                                      \
  Field {                                                                                 \
    name, [](const RunConfig& c) { return str(c.expr); },                                 \
        [](RunConfig& c, std::string_view v) { c.expr = number<type>(v, name); }          \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"events", [](const RunConfig& c) { return c.events.string(); },
       [](RunConfig& c, std::string_view v) { c.events = std::string(v); }},
      {"product_graph", [](const RunConfig& c) { return c.product_graph.string(); },
       [](RunConfig& c, std::string_view v) { c.product_graph = std::string(v); }},
      {"out", [](const RunConfig& c) { return c.out.string(); },
       [](RunConfig& c, std::string_view v) { c.out = std::string(v); }},
      {"actions", [](const RunConfig& c) { return c.actions; },
       [](RunConfig& c, std::string_view v) {
         if (!v.empty()) ActionTable::parse(v);
         c.actions = std::string(v);
       }},
      RETE_FIELD("steps", steps, std::size_t),
      {"split", [](const RunConfig& c) { return c.split.to_string(); },
       [](RunConfig& c, std::string_view v) { c.split = Split::parse(v); }},
      {"segmentation", [](const RunConfig& c) { return std::string(rete::to_string(c.segmentation)); },
       [](RunConfig& c, std::string_view v) { c.segmentation = parse_segmentation_rule(v); }},
      RETE_FIELD("kcore", kcore, std::size_t),
      {"ensemble", [](const RunConfig& c) { return c.ensemble.to_string(); },
       [](RunConfig& c, std::string_view v) { c.ensemble = EnsembleConfig::parse(v); }},
      RETE_FIELD("dim", model.dim, int),
      RETE_FIELD("layers", model.layers, int),
      {"pool", [](const RunConfig& c) { return std::string(rete::to_string(c.model.pool)); },
       [](RunConfig& c, std::string_view v) { c.model.pool = parse_pool_mode(v); }},
      {"aggregate_activation",
       [](const RunConfig& c) { return std::string(num::to_string(c.model.aggregate_activation)); },
       [](RunConfig& c, std::string_view v) { c.model.aggregate_activation = num::parse_activation(v); }},
      {"fusion_activation",
       [](const RunConfig& c) { return std::string(num::to_string(c.model.fusion_activation)); },
       [](RunConfig& c, std::string_view v) { c.model.fusion_activation = num::parse_activation(v); }},
      RETE_FIELD("attention_slope", model.attention_slope, double),
      {"self_loop_fallback", [](const RunConfig& c) { return str(c.model.self_loop_fallback); },
       [](RunConfig& c, std::string_view v) { c.model.self_loop_fallback = boolean(v, "self_loop_fallback"); }},
      RETE_FIELD("warp_margin", train.warp.margin, double),
      RETE_FIELD("warp_negatives", train.warp.negatives, int),
      RETE_FIELD("lr", train.optim.lr, double),
      RETE_FIELD("l2", train.optim.l2, double),
      RETE_FIELD("batch_size", train.optim.batch_size, int),
      RETE_FIELD("epochs", train.optim.epochs, int),
      RETE_FIELD("patience", train.optim.patience, int),
      RETE_FIELD("select_k", train.optim.select_k, std::size_t),
      RETE_FIELD("kgc_margin", train.kgc.margin, double),
      RETE_FIELD("kgc_negatives", train.kgc.negatives, int),
      RETE_FIELD("kgc_batch_size", train.kgc.batch_size, int),
      RETE_FIELD("pretrain_epochs", train.pretrain.epochs, int),
      RETE_FIELD("pretrain_lr", train.pretrain.lr, double),
      RETE_FIELD("pretrain_batch_size", train.pretrain.batch_size, int),
      RETE_FIELD("pretrain_negatives", train.pretrain.negatives, int),
      RETE_FIELD("pretrain_margin", train.pretrain.margin, double),
      RETE_FIELD("k", k, std::size_t),
      {"eval_mode", [](const RunConfig& c) { return std::string(rete::to_string(c.eval_mode)); },
       [](RunConfig& c, std::string_view v) { c.eval_mode = parse_eval_mode(v); }},
      {"eval_split", [](const RunConfig& c) { return c.eval_split; },
       [](RunConfig& c, std::string_view v) {
         if (v != "validation" && v != "test") {
           throw Error(ErrorCode::kConfig, "eval_split must be validation or test, got '" + std::string(v) + "'");
         }
         c.eval_split = std::string(v);
       }},
      RETE_FIELD("seed", seed, std::uint64_t),
  };
  return table;
}

#undef RETE_FIELD

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      try {
        f.set(*this, trim(value));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kConfig) throw;
        throw Error(ErrorCode::kConfig, std::string(key) + ": " + e.what());
      }
      return;
    }
  }
  throw Error(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
}

RunConfig RunConfig::parse(std::string_view text, std::string_view source) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw Error(ErrorCode::kConfig, where + "expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, where + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::string RunConfig::to_string() const {
  std::string out;
  for (const Field& f : fields()) out += std::string(f.key) + " = " + f.get(*this) + "\n";
  return out;
}

ModelConfig RunConfig::model_config() const {
  ModelConfig m = model;
  m.ensemble_size = static_cast<int>(ensemble.size());
  return m;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig t = train;
  t.optim.seed = seed;
  return t;
}

}  // namespace rete
