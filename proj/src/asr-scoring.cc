// asdrkit/asr-scoring.cc

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

#include "asdrkit/asr-scoring.h"

#include <unicode/brkiter.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>

#include "asdrkit/assignment.h"
#include "asdrkit/parallel.h"

namespace asdrkit {

std::optional<double> EditCounts::rate() const {
  if (ref_len == 0) return std::nullopt;
  return static_cast<double>(errors()) / static_cast<double>(ref_len);
}

EditCounts &EditCounts::operator+=(const EditCounts &o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  ref_len += o.ref_len;
  return *this;
}

EditCounts edit_distance(std::span<const std::string> ref,
                         std::span<const std::string> hyp) {
  // Each cell holds the counts of the path a preferring backtrace would take
  // from that cell back to the origin.
  struct Cell {
    std::size_t s, d, i;
    std::size_t cost() const { return s + d + i; }
  };
  const std::size_t m = hyp.size();
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = {0, 0, j};
  for (std::size_t r = 1; r <= ref.size(); ++r) {
    cur[0] = {0, r, 0};
    for (std::size_t j = 1; j <= m; ++j) {
      const bool same = ref[r - 1] == hyp[j - 1];
      Cell diag = prev[j - 1];
      if (!same) ++diag.s;
      Cell del = prev[j];
      ++del.d;
      Cell ins = cur[j - 1];
      ++ins.i;
      Cell best = diag;
      if (del.cost() < best.cost()) best = del;
      if (ins.cost() < best.cost()) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const Cell &c = prev[m];
  return {c.s, c.d, c.i, ref.size()};
}

namespace {

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

bool is_punctuation(std::string_view grapheme) {
  std::int32_t i = 0;
  UChar32 cp = 0;
  U8_NEXT(grapheme.data(), i, static_cast<std::int32_t>(grapheme.size()), cp);
  return cp >= 0 && u_ispunct(cp);
}

}  // namespace

std::vector<std::string> split_graphemes(std::string_view utf8) {
  std::vector<std::string> out;
  if (utf8.empty()) return out;
  if (is_ascii(utf8)) {
    for (std::size_t i = 0; i < utf8.size(); ++i) {
      if (utf8[i] == '\r' && i + 1 < utf8.size() && utf8[i + 1] == '\n') {
        out.emplace_back("\r\n");
        ++i;
      } else {
        out.emplace_back(1, utf8[i]);
      }
    }
    return out;
  }
  thread_local std::unique_ptr<icu::BreakIterator> iter;
  if (!iter) {
    UErrorCode status = U_ZERO_ERROR;
    iter.reset(icu::BreakIterator::createCharacterInstance(icu::Locale::getRoot(),
                                                           status));
    if (U_FAILURE(status)) {
      iter.reset();
      throw std::runtime_error("cannot create grapheme break iterator");
    }
  }
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())));
  iter->setText(text);
  std::int32_t start = iter->first();
  for (std::int32_t end = iter->next(); end != icu::BreakIterator::DONE;
       start = end, end = iter->next()) {
    std::string g;
    text.tempSubStringBetween(start, end).toUTF8String(g);
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::string> tokenize(std::span<const std::string> words,
                                  const TokenizeOptions &opts) {
  std::vector<std::string> out;
  for (const auto &w : words) {
    if (opts.unit == TokenUnit::kWord && !opts.strip_punctuation) {
      out.push_back(w);
      continue;
    }
    auto graphemes = split_graphemes(w);
    if (opts.strip_punctuation) std::erase_if(graphemes, is_punctuation);
    if (opts.unit == TokenUnit::kCharacter) {
      for (auto &g : graphemes) out.push_back(std::move(g));
    } else if (!graphemes.empty()) {
      std::string joined;
      for (const auto &g : graphemes) joined += g;
      out.push_back(std::move(joined));
    }
  }
  return out;
}

CerReport cer(const TranscriptSet &ref, const TranscriptSet &hyp,
              const TokenizeOptions &opts) {
  for (const auto &[key, _] : hyp) {
    if (!ref.contains(key)) {
      throw std::invalid_argument("hypothesis utterance '" +
                                  format_utterance_id(key) +
                                  "' has no reference");
    }
  }
  CerReport rep;
  static const std::vector<std::string> kEmpty;
  for (const auto &[key, words] : ref) {
    auto h = hyp.find(key);
    auto ref_tokens = tokenize(words, opts);
    auto hyp_tokens = tokenize(h != hyp.end() ? h->second : kEmpty, opts);
    EditCounts c = edit_distance(ref_tokens, hyp_tokens);
    rep.total += c;
    rep.utterances.emplace_back(key, c);
  }
  return rep;
}

std::map<std::string, std::vector<std::string>> speaker_streams(
    const TranscriptSet &set, std::string_view recording,
    const TokenizeOptions &opts) {
  std::map<std::string, std::vector<std::string>> out;
  // TranscriptSet iterates in (recording, speaker, onset, offset) order.
  UtteranceKey first{std::string(recording), "", 0, 0};
  for (auto it = set.lower_bound(first);
       it != set.end() && it->first.recording == recording; ++it) {
    const auto &[key, words] = *it;
    auto &stream = out[key.speaker];
    for (auto &t : tokenize(words, opts)) stream.push_back(std::move(t));
  }
  return out;
}

CpcerReport cpcer(const TranscriptSet &ref, const TranscriptSet &hyp,
                  const TokenizeOptions &opts, std::size_t threads) {
  std::set<std::string> rec_set;
  for (const auto &[key, _] : ref) rec_set.insert(key.recording);
  for (const auto &[key, _] : hyp) rec_set.insert(key.recording);
  std::vector<std::string> recs(rec_set.begin(), rec_set.end());

  CpcerReport rep;
  rep.recordings.resize(recs.size());
  parallel_for(recs.size(), threads, [&](std::size_t i) {
    RecordingCpcer &out = rep.recordings[i];
    out.recording = recs[i];
    auto ref_streams = speaker_streams(ref, recs[i], opts);
    auto hyp_streams = speaker_streams(hyp, recs[i], opts);
    std::vector<const std::string *> ref_spk, hyp_spk;
    std::vector<const std::vector<std::string> *> ref_tok, hyp_tok;
    for (const auto &[s, t] : ref_streams) {
      ref_spk.push_back(&s);
      ref_tok.push_back(&t);
    }
    for (const auto &[s, t] : hyp_streams) {
      hyp_spk.push_back(&s);
      hyp_tok.push_back(&t);
    }
    std::vector<char> ref_used(ref_spk.size(), 0), hyp_used(hyp_spk.size(), 0);
    if (!ref_spk.empty() && !hyp_spk.empty()) {
      std::vector<EditCounts> counts(ref_spk.size() * hyp_spk.size());
      CostMatrix cost(ref_spk.size(), hyp_spk.size());
      for (std::size_t r = 0; r < ref_spk.size(); ++r) {
        for (std::size_t h = 0; h < hyp_spk.size(); ++h) {
          auto &c = counts[r * hyp_spk.size() + h];
          c = edit_distance(*ref_tok[r], *hyp_tok[h]);
          // Leaving a pair unmatched costs |r| + |h|, so matching saves
          // that much minus the edit errors.
          cost(r, h) = static_cast<double>(c.errors()) -
                       static_cast<double>(ref_tok[r]->size() + hyp_tok[h]->size());
        }
      }
      for (const auto &[r, h] : solve_min_cost(cost).pairs) {
        out.assignment.emplace_back(*ref_spk[r], *hyp_spk[h]);
        out.counts += counts[r * hyp_spk.size() + h];
        ref_used[r] = hyp_used[h] = 1;
      }
    }
    for (std::size_t r = 0; r < ref_spk.size(); ++r) {
      if (!ref_used[r]) {
        out.counts.deletions += ref_tok[r]->size();
        out.counts.ref_len += ref_tok[r]->size();
      }
    }
    for (std::size_t h = 0; h < hyp_spk.size(); ++h) {
      if (!hyp_used[h]) out.counts.insertions += hyp_tok[h]->size();
    }
  });
  for (const auto &r : rep.recordings) rep.total += r.counts;
  return rep;
}

}  // namespace asdrkit
