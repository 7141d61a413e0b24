// asdrkit/timeline.h

// Copyright 2026  The asdrkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ASDRKIT_TIMELINE_H_
#define ASDRKIT_TIMELINE_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asdrkit {

/// All timeline arithmetic is done on integer ticks of 0.1 ms.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerSecond = 10000;

/// Rounds half-up to the nearest tick.
Ticks seconds_to_ticks(double seconds);
inline double ticks_to_seconds(Ticks t) {
  return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

/// Exact decimal-string to ticks conversion ("12.34567" -> 123457, half-up),
/// exponent notation included. Returns nullopt for anything that is not a
/// finite number or lies beyond about 14 years.
std::optional<Ticks> parse_ticks(std::string_view text);

/// Formats ticks as seconds with exactly four decimals.
std::string format_ticks(Ticks t);

/// True when the label is non-empty and contains no whitespace.
bool is_valid_label(std::string_view label);

/// Half-open interval [begin, end) in ticks.
struct Interval {
  Ticks begin = 0;
  Ticks end = 0;

  Ticks length() const { return end > begin ? end - begin : 0; }
  auto operator<=>(const Interval &) const = default;
};

struct Segment {
  std::string recording;
  std::string speaker;
  Ticks onset = 0;
  Ticks duration = 0;

  Ticks offset() const { return onset + duration; }
  Interval interval() const { return {onset, onset + duration}; }
  bool operator==(const Segment &) const = default;
};

/// Speaker turns of one recording in canonical order. Only constructible via
/// canonicalize(), so every instance satisfies the ordering and same-speaker
/// non-overlap invariants.
class Annotation {
 public:
  Annotation() = default;

  const std::string &recording() const { return recording_; }
  std::span<const Segment> segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }

  /// Sorted unique speaker labels.
  std::vector<std::string> speakers() const;

  bool operator==(const Annotation &) const = default;

 private:
  friend Annotation canonicalize(std::string_view, std::vector<Segment>);
  std::string recording_;
  std::vector<Segment> segments_;
};

/// Sorts segments by (onset, speaker, duration) and merges same-speaker
/// segments that overlap or abut. Throws std::invalid_argument on mixed
/// recording ids or segments violating the Segment invariants.
Annotation canonicalize(std::vector<Segment> segments);
/// As above; the recording id is used for an empty input and must match
/// every segment otherwise.
Annotation canonicalize(std::string_view recording,
                        std::vector<Segment> segments);

/// Evaluation windows of one recording: sorted, pairwise disjoint, non-empty.
class ScoringRegionSet {
 public:
  ScoringRegionSet() = default;
  /// Throws std::invalid_argument if the regions are unsorted, overlapping or
  /// empty.
  ScoringRegionSet(std::string recording, std::vector<Interval> regions);

  const std::string &recording() const { return recording_; }
  std::span<const Interval> regions() const { return regions_; }
  Ticks total() const;

 private:
  std::string recording_;
  std::vector<Interval> regions_;
};

/// Measure of the intersection of a single interval with a region set.
Ticks intersect_length(Interval iv, std::span<const Interval> regions);

/// Sorts and merges intervals into a disjoint union.
std::vector<Interval> interval_union(std::vector<Interval> intervals);

/// Set difference a \ b; both inputs disjoint and sorted.
std::vector<Interval> interval_difference(std::span<const Interval> a,
                                          std::span<const Interval> b);

/// Speech time summed per speaker (overlap counts once per active speaker).
Ticks total_speech(const Annotation &ann);
Ticks total_speech(const Annotation &ann, const ScoringRegionSet &regions);

}  // namespace asdrkit

#endif  // ASDRKIT_TIMELINE_H_
