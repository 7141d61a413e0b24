// asdrkit/formats.h

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

// Readers and writers for the interchange files:
//
//   RTTM         SPEAKER <rec> 1 <onset> <dur> <NA> <NA> <spk> <NA> <NA>
//   UEM          <rec> 1 <onset> <offset>
//   posteriors   #posteriors <rec> <frame_shift> <spk1> ... <spkS>
//                then one tab-separated row of S probabilities per frame
//   embeddings   #embeddings <rec> <dim>
//                then "<onset> <offset> v1 ... vdim" per window
//   transcripts  <rec>_<spk>_<onset-ms>_<offset-ms> tok tok ...
//
// All parsers either return a value or throw ParseError carrying a 1-based
// line and column.

#ifndef ASDRKIT_FORMATS_H_
#define ASDRKIT_FORMATS_H_

#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asdrkit/timeline.h"

namespace asdrkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string &reason);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string &reason() const { return reason_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

using AnnotationSet = std::map<std::string, Annotation>;

AnnotationSet parse_rttm(std::string_view text);
AnnotationSet parse_rttm(std::istream &in);
std::string emit_rttm(const AnnotationSet &anns);
std::string emit_rttm(const Annotation &ann);

std::map<std::string, ScoringRegionSet> parse_uem(std::string_view text);
std::map<std::string, ScoringRegionSet> parse_uem(std::istream &in);
std::string emit_uem(const std::map<std::string, ScoringRegionSet> &uem);

/// Frame-by-speaker activity probabilities, row-major T x S.
struct PosteriorMatrix {
  std::string recording;
  double frame_shift = 0.01;
  std::vector<std::string> speakers;
  std::size_t frames = 0;
  std::vector<double> values;

  std::size_t num_speakers() const { return speakers.size(); }
  double at(std::size_t frame, std::size_t speaker) const {
    return values[frame * speakers.size() + speaker];
  }
  double &at(std::size_t frame, std::size_t speaker) {
    return values[frame * speakers.size() + speaker];
  }
  bool operator==(const PosteriorMatrix &) const = default;
};

PosteriorMatrix parse_posteriors(std::string_view text);
PosteriorMatrix parse_posteriors(std::istream &in);
std::string emit_posteriors(const PosteriorMatrix &p);

struct UtteranceKey {
  std::string recording;
  std::string speaker;
  Ticks onset = 0;
  Ticks offset = 0;
  auto operator<=>(const UtteranceKey &) const = default;
};

/// "<rec>_<spk>_<onset-ms>_<offset-ms>" with six-digit zero padding.
std::string format_utterance_id(const UtteranceKey &key);

/// Whitespace-separated tokens per utterance, ordered by
/// (recording, speaker, onset, offset).
using TranscriptSet = std::map<UtteranceKey, std::vector<std::string>>;

TranscriptSet parse_transcripts(std::string_view text);
TranscriptSet parse_transcripts(std::istream &in);
std::string emit_transcripts(const TranscriptSet &set);

struct EmbeddingWindow {
  Ticks onset = 0;
  Ticks offset = 0;
  std::vector<double> vector;
  bool operator==(const EmbeddingWindow &) const = default;
};

struct EmbeddingSet {
  std::string recording;
  std::size_t dim = 0;
  std::vector<EmbeddingWindow> items;
  bool operator==(const EmbeddingSet &) const = default;
};

EmbeddingSet parse_embeddings(std::string_view text);
EmbeddingSet parse_embeddings(std::istream &in);
std::string emit_embeddings(const EmbeddingSet &e);

/// Reads a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string &path);
/// Writes a whole file; throws std::runtime_error naming the path on failure.
void write_file(const std::string &path, std::string_view contents);

}  // namespace asdrkit

#endif  // ASDRKIT_FORMATS_H_
