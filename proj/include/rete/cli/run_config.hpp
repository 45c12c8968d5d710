#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rete/eval/evaluate.hpp"
#include "rete/model/config.hpp"
#include "rete/sampler/ensemble.hpp"
#include "rete/tkg/segmentation.hpp"
#include "rete/train/trainer.hpp"

namespace rete {

/// Everything a pipeline run needs. Serialised as `key = value` lines.
struct RunConfig {
  std::filesystem::path events = "events.tsv";
  std::filesystem::path product_graph = "product_graph.tsv";
  std::filesystem::path out = "run";
  /// Extra `name:kind` action declarations; empty uses the built-in table.
  std::string actions;

  std::size_t steps = 28;
  Split split;
  SegmentationRule segmentation = SegmentationRule::kEqualCount;
  std::size_t kcore = 10;

  EnsembleConfig ensemble = EnsembleConfig::defaults();
  ModelConfig model;
  TrainConfig train;

  std::size_t k = 20;
  EvalMode eval_mode = EvalMode::kFrozen;
  /// "validation" or "test".
  std::string eval_split = "test";
  std::uint64_t seed = 0;

  /// Parses `key = value` lines on top of the defaults; `#` starts a comment.
  /// Unknown keys and malformed values are Error(kConfig).
  static RunConfig parse(std::string_view text, std::string_view source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  /// Applies one `key=value` override.
  void set(std::string_view key, std::string_view value);

  /// Every key in a fixed order with canonical values.
  std::string to_string() const;

  /// Model config with the ensemble size taken from `ensemble`.
  ModelConfig model_config() const;
  /// Train config with the run seed.
  TrainConfig train_config() const;
};

}  // namespace rete
