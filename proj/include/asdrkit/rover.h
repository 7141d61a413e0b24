// asdrkit/rover.h

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

#ifndef ASDRKIT_ROVER_H_
#define ASDRKIT_ROVER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asdrkit/asr-scoring.h"
#include "asdrkit/formats.h"

namespace asdrkit {

/// One aligned position: per system a token or NULL (nullopt).
struct WtnSlot {
  std::vector<std::optional<std::string>> tokens;
  std::vector<std::optional<double>> confidences;
};

struct WordTransitionNetwork {
  std::size_t num_systems = 0;
  std::vector<WtnSlot> slots;
  /// Edit cost paid when aligning system i (0 for the first system).
  std::vector<std::size_t> alignment_costs;
};

/// Aligns the hypotheses one after another into a slot network. A token
/// matches a slot for free if it equals any token already there. Among
/// equal-cost alignments, match/substitute beats leaving the slot empty,
/// which beats opening a new slot. `confidences`, when non-empty, holds one
/// vector per hypothesis with one value in [0, 1] per token.
WordTransitionNetwork build_wtn(
    std::span<const std::vector<std::string>> hyps,
    std::span<const std::vector<double>> confidences = {});

/// Per slot, emits the token maximizing
///   alpha * N(w) / Ns + (1 - alpha) * meanconf(w)
/// with meanconf(NULL) = null_conf and missing confidences taken as 1.
/// Ties go to non-NULL, then to the token seen first in system order.
std::vector<std::string> vote(const WordTransitionNetwork &wtn, double alpha,
                              double null_conf);

struct RoverOptions {
  double alpha = 1.0;
  double null_conf = 0.7;
  TokenizeOptions tokens;
};

/// Fuses per-utterance outputs of several systems given best system first.
/// Throws std::invalid_argument if the systems' utterance keys differ.
TranscriptSet fuse_transcripts(std::span<const TranscriptSet> systems,
                               const RoverOptions &opts = {});

}  // namespace asdrkit

#endif  // ASDRKIT_ROVER_H_
