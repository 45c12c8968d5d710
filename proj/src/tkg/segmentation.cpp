#include "rete/tkg/segmentation.hpp"

#include <algorithm>
#include <charconv>

#include "rete/error.hpp"
#include "rete/text.hpp"

namespace rete {

Split Split::parse(std::string_view text) {
  auto parts = split_any(text, ", /");
  if (parts.size() != 4) {
    throw Error(ErrorCode::kConfig, "split needs 4 counts (background,train,val,test), got '" +
                                        std::string(text) + "'");
  }
  std::array<std::size_t, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    auto [ptr, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v[i]);
    if (ec != std::errc{} || ptr != parts[i].data() + parts[i].size()) {
      throw Error(ErrorCode::kConfig, "split count '" + std::string(parts[i]) + "' is not a count");
    }
  }
  return Split{v[0], v[1], v[2], v[3]};
}

std::string Split::to_string() const {
  return std::to_string(background) + "," + std::to_string(train) + "," +
         std::to_string(validation) + "," + std::to_string(test);
}

std::string_view to_string(SegmentationRule rule) {
  return rule == SegmentationRule::kEqualCount ? "equal-count" : "equal-duration";
}

SegmentationRule parse_segmentation_rule(std::string_view text) {
  if (text == "equal-count") return SegmentationRule::kEqualCount;
  if (text == "equal-duration") return SegmentationRule::kEqualDuration;
  throw Error(ErrorCode::kConfig, "unknown segmentation rule '" + std::string(text) + "'");
}

std::size_t TimeSegmentation::step_of(std::int64_t timestamp) const {
  if (timestamp < boundaries.front() || timestamp >= boundaries.back()) {
    throw Error(ErrorCode::kInvalidArgument,
                "timestamp " + std::to_string(timestamp) + " outside the segmented range");
  }
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), timestamp);
  return static_cast<std::size_t>(it - boundaries.begin()) - 1;
}

TimeSegmentation segment_time(const EventLog& log, std::size_t num_steps, const Split& split,
                              SegmentationRule rule) {
  if (log.events.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot segment an empty log");
  if (num_steps == 0) throw Error(ErrorCode::kInvalidArgument, "number of steps must be >= 1");
  if (split.total() != num_steps) {
    throw Error(ErrorCode::kInvalidArgument,
                "split " + split.to_string() + " does not sum to " + std::to_string(num_steps));
  }

  std::vector<std::int64_t> distinct;
  std::vector<std::size_t> cum_after;  // events with timestamp <= distinct[k]
  std::size_t seen = 0;
  for (const auto& e : log.events) {
    ++seen;
    if (distinct.empty() || e.timestamp != distinct.back()) {
      distinct.push_back(e.timestamp);
      cum_after.push_back(seen);
    } else {
      cum_after.back() = seen;
    }
  }
  const std::size_t d = distinct.size();
  const std::size_t n = log.events.size();
  if (num_steps > d) {
    throw Error(ErrorCode::kInvalidArgument,
                std::to_string(num_steps) + " steps exceed the " + std::to_string(d) +
                    " distinct timestamps");
  }

  TimeSegmentation seg;
  seg.split = split;
  seg.boundaries.push_back(distinct.front());
  if (rule == SegmentationRule::kEqualCount) {
    const std::size_t q = n / num_steps;
    const std::size_t r = n % num_steps;
    std::size_t prev = 0;
    for (std::size_t i = 1; i < num_steps; ++i) {
      const std::size_t target = i * q + std::min(i, r);
      // smallest k >= 1 with cum_after[k - 1] >= target
      auto it = std::lower_bound(cum_after.begin(), cum_after.end(), target);
      std::size_t k = static_cast<std::size_t>(it - cum_after.begin()) + 1;
      k = std::clamp(k, prev + 1, d - (num_steps - i));
      seg.boundaries.push_back(distinct[k]);
      prev = k;
    }
  } else {
    const std::int64_t lo = distinct.front();
    const std::int64_t span = distinct.back() - lo + 1;
    for (std::size_t i = 1; i < num_steps; ++i) {
      seg.boundaries.push_back(lo + static_cast<std::int64_t>(
                                        (static_cast<__int128>(span) * i) / num_steps));
    }
  }
  seg.boundaries.push_back(distinct.back() + 1);

  seg.counts.assign(num_steps, 0);
  for (const auto& e : log.events) ++seg.counts[seg.step_of(e.timestamp)];
  return seg;
}

}  // namespace rete
