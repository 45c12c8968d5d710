#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rete/tkg/types.hpp"

namespace rete {

/// Step counts for background / train / validation / test.
struct Split {
  std::size_t background = 10;
  std::size_t train = 10;
  std::size_t validation = 2;
  std::size_t test = 6;

  std::size_t total() const { return background + train + validation + test; }
  std::size_t train_begin() const { return background; }
  std::size_t train_end() const { return background + train; }
  std::size_t validation_end() const { return train_end() + validation; }

  bool operator==(const Split&) const = default;

  static Split parse(std::string_view text);
  std::string to_string() const;
};

enum class SegmentationRule { kEqualCount, kEqualDuration };

std::string_view to_string(SegmentationRule rule);
SegmentationRule parse_segmentation_rule(std::string_view text);

/// Step t covers timestamps in [boundaries[t], boundaries[t+1]); the final
/// boundary is one past the largest timestamp. Events sharing a timestamp
/// always fall in the same step.
struct TimeSegmentation {
  std::vector<std::int64_t> boundaries;
  std::vector<std::size_t> counts;
  Split split;

  std::size_t num_steps() const { return counts.size(); }
  std::size_t step_of(std::int64_t timestamp) const;
};

/// Equal-count rule: segment i receives ceil(N/T) events for i < N mod T and
/// floor(N/T) otherwise, as closely as ties in the timestamps allow; events
/// sharing the timestamp at a cut stay in the earlier segment.
TimeSegmentation segment_time(const EventLog& log, std::size_t num_steps, const Split& split,
                              SegmentationRule rule = SegmentationRule::kEqualCount);

}  // namespace rete
