// asdrkit/pipeline.h

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

// File-level plumbing shared by the command-line tool and the config-driven
// runner: loaders that attach file names to errors, text and JSON reports,
// and the stage runner itself.

#ifndef ASDRKIT_PIPELINE_H_
#define ASDRKIT_PIPELINE_H_

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asdrkit/asr-scoring.h"
#include "asdrkit/der.h"
#include "asdrkit/formats.h"

namespace asdrkit {

/// Bad input file, bad config or inconsistent arguments (exit status 2).
/// The message starts with "<file>:<line>:" whenever a line is known.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AnnotationSet load_rttm(const std::string &path);
std::map<std::string, ScoringRegionSet> load_uem(const std::string &path);
PosteriorMatrix load_posteriors(const std::string &path);
TranscriptSet load_transcripts(const std::string &path);
EmbeddingSet load_embeddings(const std::string &path);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

// Reports. The JSON documents carry every number at full precision; the text
// forms print percentages with two decimals. A metric with an empty
// reference is reported as "undefined" (JSON null).
std::string der_text(const CorpusDer &r);
std::string der_json(const CorpusDer &r, const DerOptions &opts);
std::string cer_text(const CerReport &r);
std::string cer_json(const CerReport &r);
std::string cpcer_text(const CpcerReport &r);
std::string cpcer_json(const CpcerReport &r);

/// DOVER fusion per recording over several RTTM sets; a recording missing
/// from one set counts as silence in that hypothesis. Weights are
/// rank^(-exponent); an empty `ranks` means 1..K in input order.
AnnotationSet fuse_annotation_sets(const std::vector<AnnotationSet> &sets,
                                   std::vector<unsigned> ranks, double exponent);

struct RunOptions {
  bool resume = false;
  std::size_t threads = 1;
};

struct RunResult {
  std::string summary;                // also written to <output_dir>/summary.txt
  std::vector<std::string> executed;  // stage names, in order
  std::vector<std::string> reused;    // stages skipped by --resume
  bool undefined_metric = false;      // some score stage had no reference
};

/// Runs the stages of a JSON pipeline config; see docs/pipeline.md for the
/// schema. Throws InputError for config or input problems.
RunResult run_pipeline(const std::string &config_path, const RunOptions &opts);

}  // namespace asdrkit

#endif  // ASDRKIT_PIPELINE_H_
