// asdrkit/asr-scoring.h

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

#ifndef ASDRKIT_ASR_SCORING_H_
#define ASDRKIT_ASR_SCORING_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asdrkit/der.h"
#include "asdrkit/formats.h"

namespace asdrkit {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  /// errors / ref_len; nullopt for an empty reference.
  std::optional<double> rate() const;
  EditCounts &operator+=(const EditCounts &o);
  bool operator==(const EditCounts &) const = default;
};

/// Unit-cost Levenshtein alignment. Among optimal alignments the one chosen
/// is what a backtrace preferring substitution, then deletion, then
/// insertion would produce; it is computed forward in O(|hyp|) memory.
EditCounts edit_distance(std::span<const std::string> ref,
                         std::span<const std::string> hyp);

enum class TokenUnit { kCharacter, kWord };

struct TokenizeOptions {
  TokenUnit unit = TokenUnit::kCharacter;
  /// Drops graphemes whose first code point is Unicode punctuation.
  bool strip_punctuation = false;
};

/// Extended grapheme clusters of a UTF-8 string.
std::vector<std::string> split_graphemes(std::string_view utf8);

/// Turns whitespace-separated transcript words into scoring tokens.
std::vector<std::string> tokenize(std::span<const std::string> words,
                                  const TokenizeOptions &opts);

struct CerReport {
  std::vector<std::pair<UtteranceKey, EditCounts>> utterances;
  EditCounts total;
  std::optional<double> rate() const { return total.rate(); }
};

/// Pooled CER over reference utterances; missing hypotheses score as all
/// deletions. Throws std::invalid_argument if hyp has a key absent from ref.
CerReport cer(const TranscriptSet &ref, const TranscriptSet &hyp,
              const TokenizeOptions &opts = {});

/// Per-speaker token streams of one recording, each the concatenation of the
/// speaker's utterances in (onset, offset) order.
std::map<std::string, std::vector<std::string>> speaker_streams(
    const TranscriptSet &set, std::string_view recording,
    const TokenizeOptions &opts = {});

struct RecordingCpcer {
  std::string recording;
  SpeakerMap assignment;  // ref speaker -> hyp speaker
  EditCounts counts;
};

struct CpcerReport {
  std::vector<RecordingCpcer> recordings;
  EditCounts total;
  std::optional<double> rate() const { return total.rate(); }
};

/// Concatenated minimum-permutation CER. Unassigned reference speakers count
/// as deletions, unassigned hypothesis speakers as insertions.
CpcerReport cpcer(const TranscriptSet &ref, const TranscriptSet &hyp,
                  const TokenizeOptions &opts = {}, std::size_t threads = 1);

}  // namespace asdrkit

#endif  // ASDRKIT_ASR_SCORING_H_
