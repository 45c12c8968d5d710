#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "rete/cli/run_config.hpp"

namespace rete {

/// Artifact locations under a run's output directory.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path dataset() const { return root / "dataset"; }
  std::filesystem::path config() const { return root / "config.txt"; }
  std::filesystem::path subgraphs() const { return root / "subgraphs.bin"; }
  std::filesystem::path checkpoint() const { return root / "model.bin"; }
  std::filesystem::path loss_history() const { return root / "loss.csv"; }
  std::filesystem::path pretrain_history() const { return root / "pretrain_loss.csv"; }
  std::filesystem::path report(EvalMode mode, std::string_view split) const;
  std::filesystem::path scores(EvalMode mode, std::string_view split) const;
  std::filesystem::path attention(std::string_view user) const;
};

struct IngestSummary {
  std::size_t users = 0;
  std::size_t products = 0;
  std::size_t queries = 0;
  std::size_t entities = 0;
  std::size_t product_interactions = 0;
  std::size_t query_interactions = 0;
  std::size_t static_triples = 0;
  /// Interaction events plus static triples.
  std::size_t triplets = 0;
};

/// Raw logs -> k-core -> product graph -> segmentation -> snapshot store.
IngestSummary cmd_ingest(const RunConfig& cfg, std::ostream& log);
void cmd_sample(const RunConfig& cfg, std::ostream& log);
void cmd_train(const RunConfig& cfg, std::ostream& log);
void cmd_eval(const RunConfig& cfg, std::ostream& log);
/// Writes `user,step_from,step_to,beta` for every step_to over the user's
/// whole trajectory and returns the number of rows.
std::size_t cmd_export_attention(const RunConfig& cfg, std::string_view user, std::ostream& log);
/// Writes planted synthetic inputs into `dir`.
void cmd_synth(const std::filesystem::path& dir, bool drift, std::uint64_t seed, std::ostream& log);
/// Runs the built-in oracle checks; true when all pass.
bool cmd_selftest(std::ostream& log);

}  // namespace rete
