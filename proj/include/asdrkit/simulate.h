// asdrkit/simulate.h

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

// Seeded generators and corrupters for synthetic conversations, posteriors,
// transcripts and speaker embeddings. Every function is a pure function of
// its arguments; the random stream is the Xoshiro256 in random.h.

#ifndef ASDRKIT_SIMULATE_H_
#define ASDRKIT_SIMULATE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asdrkit/formats.h"
#include "asdrkit/timeline.h"

namespace asdrkit {

struct ConversationSpec {
  std::uint64_t seed = 0;
  std::size_t n_speakers = 2;
  double duration = 300.0;     // seconds
  double mean_turn = 4.0;      // seconds, exponential turn lengths
  double overlap_ratio = 0.0;  // target overlapped / total speech, [0, 0.5]
  std::string recording = "sim";

  void validate() const;
};

/// Alternating-speaker turns. Each speaker change either leaves a pause or
/// starts the next turn early; the early-start probability and depth are set
/// so the expected overlap fraction equals overlap_ratio. Turns never overlap
/// more than two deep. Speakers are named "spk1".."spkN".
Annotation gen_conversation(const ConversationSpec &spec);

/// Frame posteriors of an annotation: the {0,1} activity at each frame
/// midpoint, plus Normal(0, noise_sigma) noise clamped to [0,1] when
/// noise_sigma > 0. `speakers` fixes the column order; frames cover
/// [0, duration).
PosteriorMatrix gen_posteriors(const Annotation &ann, double frame_shift,
                               std::span<const std::string> speakers,
                               double duration, double noise_sigma = 0.0,
                               std::uint64_t seed = 0);

/// Fraction of speech time (union of all speakers) during which two or more
/// speakers are active.
double overlap_fraction(const Annotation &ann);

struct CorruptionSpec {
  std::uint64_t seed = 0;
  double boundary_jitter_sigma = 0.0;  // seconds
  double miss_rate = 0.0;
  double false_alarm_rate = 0.0;
  double label_swap_rate = 0.0;
  double sub_rate = 0.0;
  double ins_rate = 0.0;
  double del_rate = 0.0;

  void validate() const;
};

/// Per segment: jitter both boundaries, drop with miss_rate, move to another
/// speaker with label_swap_rate and add a spurious segment with
/// false_alarm_rate. The result is canonicalized.
Annotation corrupt_annotation(const Annotation &ann, const CorruptionSpec &spec);

/// Per token, independently: delete with del_rate, else substitute by a
/// different vocabulary token with sub_rate; then insert a random token after
/// it with ins_rate.
std::vector<std::string> corrupt_transcript(std::span<const std::string> tokens,
                                            const CorruptionSpec &spec,
                                            std::span<const std::string> vocabulary);

/// `size` CJK ideographs starting at U+4E00.
std::vector<std::string> default_vocabulary(std::size_t size = 500);

/// Uniform random tokens.
std::vector<std::string> gen_tokens(std::uint64_t seed, std::size_t count,
                                    std::span<const std::string> vocabulary);

/// One utterance per segment with round(chars_per_second * duration) tokens
/// (at least one).
TranscriptSet gen_transcripts(const Annotation &ann, std::uint64_t seed,
                              double chars_per_second,
                              std::span<const std::string> vocabulary);

/// Applies corrupt_transcript to every utterance; the seed is advanced per
/// utterance so utterances are corrupted independently.
TranscriptSet corrupt_transcripts(const TranscriptSet &set,
                                  const CorruptionSpec &spec,
                                  std::span<const std::string> vocabulary);

struct EmbeddingFixture {
  EmbeddingSet set;
  std::vector<std::size_t> labels;  // true cluster per window
};

/// k unit-norm centers with pairwise cosine below 0.3, n_per_cluster noisy
/// samples each (isotropic Normal(0, noise_sigma)), presented in shuffled
/// order as 1.5 s windows with a 0.75 s hop.
EmbeddingFixture gen_embeddings(std::uint64_t seed, std::size_t k,
                                std::size_t n_per_cluster, std::size_t dim,
                                double noise_sigma,
                                const std::string &recording = "sim");

}  // namespace asdrkit

#endif  // ASDRKIT_SIMULATE_H_
