// asdrkit/tsvad-post.cc

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

#include "asdrkit/tsvad-post.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asdrkit {

void PostProcessConfig::validate() const {
  if (median_window == 0 || median_window % 2 == 0) {
    throw std::invalid_argument("median window must be an odd frame count");
  }
  if (!(offset_threshold >= 0.0 && offset_threshold <= onset_threshold &&
        onset_threshold <= 1.0)) {
    throw std::invalid_argument(
        "thresholds must satisfy 0 <= offset <= onset <= 1");
  }
  if (!(min_speech >= 0.0) || !(min_silence >= 0.0) ||
      !std::isfinite(min_speech) || !std::isfinite(min_silence)) {
    throw std::invalid_argument("min_speech and min_silence must be >= 0");
  }
}

PosteriorMatrix median_filter(const PosteriorMatrix &p, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    throw std::invalid_argument("median window must be odd");
  }
  PosteriorMatrix out = p;
  if (window == 1 || p.frames == 0) return out;
  const long half = static_cast<long>(window / 2);
  const long last = static_cast<long>(p.frames) - 1;
  std::vector<double> buf(window);
  for (std::size_t s = 0; s < p.num_speakers(); ++s) {
    for (long t = 0; t <= last; ++t) {
      for (long k = -half; k <= half; ++k) {
        long idx = std::clamp(t + k, 0L, last);
        buf[static_cast<std::size_t>(k + half)] =
            p.at(static_cast<std::size_t>(idx), s);
      }
      std::nth_element(buf.begin(), buf.begin() + half, buf.end());
      out.at(static_cast<std::size_t>(t), s) = buf[static_cast<std::size_t>(half)];
    }
  }
  return out;
}

std::vector<ActivityTrack> binarize(const PosteriorMatrix &p,
                                    const PostProcessConfig &cfg) {
  cfg.validate();
  std::vector<ActivityTrack> tracks(p.num_speakers(), ActivityTrack(p.frames));
  for (std::size_t s = 0; s < p.num_speakers(); ++s) {
    bool active = false;
    for (std::size_t t = 0; t < p.frames; ++t) {
      const double v = p.at(t, s);
      active = active ? v >= cfg.offset_threshold : v >= cfg.onset_threshold;
      tracks[s][t] = active;
    }
  }
  return tracks;
}

Annotation tracks_to_segments(std::span<const ActivityTrack> tracks,
                              double frame_shift, const PostProcessConfig &cfg,
                              const std::string &recording,
                              std::span<const std::string> speakers) {
  cfg.validate();
  if (!(frame_shift > 0.0)) {
    throw std::invalid_argument("frame shift must be positive");
  }
  if (tracks.size() != speakers.size()) {
    throw std::invalid_argument("one track per speaker required");
  }
  const Ticks shift = seconds_to_ticks(frame_shift);
  if (shift <= 0) throw std::invalid_argument("frame shift below tick resolution");
  const Ticks min_silence = seconds_to_ticks(cfg.min_silence);
  const Ticks min_speech = seconds_to_ticks(cfg.min_speech);

  std::vector<Segment> all;
  for (std::size_t s = 0; s < tracks.size(); ++s) {
    const ActivityTrack &track = tracks[s];
    std::vector<Interval> runs;
    for (std::size_t t = 0; t < track.size();) {
      if (!track[t]) {
        ++t;
        continue;
      }
      std::size_t end = t;
      while (end < track.size() && track[end]) ++end;
      runs.push_back({static_cast<Ticks>(t) * shift,
                      static_cast<Ticks>(end) * shift});
      t = end;
    }
    std::vector<Interval> merged;
    for (const auto &r : runs) {
      if (!merged.empty() && r.begin - merged.back().end < min_silence) {
        merged.back().end = r.end;
      } else {
        merged.push_back(r);
      }
    }
    for (const auto &r : merged) {
      if (r.length() < min_speech) continue;
      all.push_back({recording, speakers[s], r.begin, r.length()});
    }
  }
  return canonicalize(recording, std::move(all));
}

Annotation post_process(const PosteriorMatrix &p, const PostProcessConfig &cfg) {
  cfg.validate();
  auto smoothed = median_filter(p, cfg.median_window);
  auto tracks = binarize(smoothed, cfg);
  return tracks_to_segments(tracks, p.frame_shift, cfg, p.recording, p.speakers);
}

}  // namespace asdrkit
