// asdrkit/der.h

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

#ifndef ASDRKIT_DER_H_
#define ASDRKIT_DER_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asdrkit/formats.h"
#include "asdrkit/timeline.h"

namespace asdrkit {

/// Reference label -> hypothesis label, sorted by reference label.
using SpeakerMap = std::vector<std::pair<std::string, std::string>>;

struct DerOptions {
  /// Total collar width in seconds; half of it is removed on each side of
  /// every reference boundary.
  double collar = 0.25;
  /// When false, regions with more than one reference speaker are skipped.
  bool score_overlap = true;
};

struct DerReport {
  std::string recording;
  Ticks scored_speech = 0;
  Ticks missed = 0;
  Ticks false_alarm = 0;
  Ticks confusion = 0;
  SpeakerMap speaker_map;

  Ticks errors() const { return missed + false_alarm + confusion; }
  /// nullopt when there is no scored reference speech.
  std::optional<double> der() const;

  /// Sums the time components; speaker maps are not merged.
  DerReport &operator+=(const DerReport &other);
};

/// Injective map maximizing total ref/hyp overlap over the whole recording.
/// Only pairs with positive overlap are reported.
SpeakerMap optimal_speaker_mapping(const Annotation &ref, const Annotation &hyp);

/// Sweep-line DER. The speaker mapping is optimized over the scored time
/// only (after collar removal, region clipping and optional overlap
/// exclusion), so confusion is uniquely defined even when several mappings
/// tie. Throws std::invalid_argument on recording mismatch or negative collar.
DerReport compute_der(const Annotation &ref, const Annotation &hyp,
                      const DerOptions &opts);
DerReport compute_der(const Annotation &ref, const Annotation &hyp,
                      const DerOptions &opts, const ScoringRegionSet &regions);

struct CorpusDer {
  std::vector<DerReport> recordings;  // sorted by recording id
  DerReport total;                    // time-weighted aggregate
};

/// Scores every recording present in either set; a recording missing on one
/// side is scored against an empty annotation. `uem` may be null.
CorpusDer score_corpus(const AnnotationSet &ref, const AnnotationSet &hyp,
                       const DerOptions &opts,
                       const std::map<std::string, ScoringRegionSet> *uem,
                       std::size_t threads = 1);

/// baseline - system in percentage points, computed on hundredths so that
/// two-decimal inputs give an exact two-decimal result.
double absolute_reduction(double baseline, double system);

/// Two-decimal rendering of a percentage value ("49.58").
std::string format_percent(double pct);

}  // namespace asdrkit

#endif  // ASDRKIT_DER_H_
