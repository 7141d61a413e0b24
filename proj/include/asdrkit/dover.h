// asdrkit/dover.h

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

// Overlap-aware fusion of several diarization outputs (DOVER-Lap style).
//
// Hypotheses are first brought into one label space: in rank order, each
// hypothesis is matched against the running anchor by maximum overlap and
// its unmatched speakers extend the anchor. The fused output then takes,
// for every region of constant activity, the N best-voted speakers, where N
// is the weighted mean of the per-hypothesis speaker counts rounded half up.

#ifndef ASDRKIT_DOVER_H_
#define ASDRKIT_DOVER_H_

#include <span>
#include <vector>

#include "asdrkit/timeline.h"

namespace asdrkit {

struct RankedHypothesis {
  Annotation annotation;
  unsigned rank = 1;    // 1 = best
  double weight = 1.0;  // > 0
};

/// w_i = rank_i^(-exponent), normalized to sum 1. Throws on ranks < 1 or
/// duplicates.
std::vector<double> rank_weights(std::span<const unsigned> ranks,
                                 double exponent);

/// Returns the hypotheses sorted by rank with speakers renamed into the
/// shared label space. Throws std::invalid_argument on an empty list,
/// mismatched recordings, duplicate ranks or non-positive weights.
std::vector<RankedHypothesis> map_labels(std::span<const RankedHypothesis> hyps);

/// Weighted label voting over the mapped hypotheses; weights are
/// renormalized to sum 1.
Annotation fuse(std::span<const RankedHypothesis> hyps);

}  // namespace asdrkit

#endif  // ASDRKIT_DOVER_H_
