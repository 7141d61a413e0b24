// asdrkit/tsvad-post.h

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

// Decision layer turning frame-level speaker posteriors into segments:
// median smoothing, hysteresis thresholding, run extraction, gap merging and
// short-segment removal.

#ifndef ASDRKIT_TSVAD_POST_H_
#define ASDRKIT_TSVAD_POST_H_

#include <span>
#include <string>
#include <vector>

#include "asdrkit/formats.h"
#include "asdrkit/timeline.h"

namespace asdrkit {

struct PostProcessConfig {
  std::size_t median_window = 11;
  double onset_threshold = 0.5;
  double offset_threshold = 0.5;
  double min_speech = 0.2;   // seconds
  double min_silence = 0.3;  // seconds

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// One activity flag per frame.
using ActivityTrack = std::vector<bool>;

/// Per-speaker sliding median with edge replication. Throws on even windows.
PosteriorMatrix median_filter(const PosteriorMatrix &p, std::size_t window);

/// Hysteresis: a speaker becomes active at value >= onset_threshold and
/// stays active until a value < offset_threshold.
std::vector<ActivityTrack> binarize(const PosteriorMatrix &p,
                                    const PostProcessConfig &cfg);

/// Runs of active frames -> segments; same-speaker gaps shorter than
/// min_silence are closed first, then segments shorter than min_speech are
/// dropped.
Annotation tracks_to_segments(std::span<const ActivityTrack> tracks,
                              double frame_shift, const PostProcessConfig &cfg,
                              const std::string &recording,
                              std::span<const std::string> speakers);

/// median_filter -> binarize -> tracks_to_segments.
Annotation post_process(const PosteriorMatrix &p, const PostProcessConfig &cfg);

}  // namespace asdrkit

#endif  // ASDRKIT_TSVAD_POST_H_
