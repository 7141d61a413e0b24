// asdrkit/simulate.cc

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

#include "asdrkit/simulate.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "asdrkit/random.h"

namespace asdrkit {

namespace {

bool is_rate(double r) { return r >= 0.0 && r <= 1.0; }

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

// Duration draw in ticks, at least one tick.
Ticks draw_length(Xoshiro256 &rng, double mean_seconds) {
  return std::max<Ticks>(1, seconds_to_ticks(rng.exponential(mean_seconds)));
}

}  // namespace

void ConversationSpec::validate() const {
  if (n_speakers < 1) throw std::invalid_argument("n_speakers must be >= 1");
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be positive");
  }
  if (!(mean_turn > 0.0) || !std::isfinite(mean_turn)) {
    throw std::invalid_argument("mean_turn must be positive");
  }
  if (!(overlap_ratio >= 0.0 && overlap_ratio <= 0.5)) {
    throw std::invalid_argument("overlap_ratio must be in [0, 0.5]");
  }
  if (!is_valid_label(recording)) {
    throw std::invalid_argument("recording id must be a non-empty token");
  }
}

Annotation gen_conversation(const ConversationSpec &spec) {
  spec.validate();
  Xoshiro256 rng(spec.seed);
  const Ticks end = seconds_to_ticks(spec.duration);

  // With early starts happening at rate pi and depth rho * min(L_i, L_i+1),
  // E[overlap] = pi * rho * mean / 2, so overlapped/speech = f requires
  // pi * rho = 2f / (1 + f).
  const double f = spec.n_speakers > 1 ? spec.overlap_ratio : 0.0;
  const double x = 2.0 * f / (1.0 + f);
  double pi = 1.0, rho = x;
  if (x <= 0.5) {
    rho = 0.5;
    pi = 2.0 * x;
  }
  const double pause_mean = 0.25 * spec.mean_turn;

  std::vector<Segment> segs;
  std::size_t speaker = rng.index(spec.n_speakers);
  Ticks onset = 0;
  Ticks length = draw_length(rng, spec.mean_turn);
  Ticks prev_offset = 0;  // offset of the turn before the current one
  while (onset < end) {
    const Ticks offset = std::min(onset + length, end);
    segs.push_back({spec.recording, "spk" + std::to_string(speaker + 1), onset,
                    offset - onset});

    const Ticks next_length = draw_length(rng, spec.mean_turn);
    const bool early = rng.bernoulli(pi);
    const Ticks pause = draw_length(rng, pause_mean);
    std::size_t next_speaker = speaker;
    if (spec.n_speakers > 1) {
      next_speaker = rng.index(spec.n_speakers - 1);
      if (next_speaker >= speaker) ++next_speaker;
    }
    Ticks next_onset;
    if (early && f > 0.0) {
      const auto depth = static_cast<Ticks>(
          std::llround(rho * static_cast<double>(std::min(length, next_length))));
      next_onset = std::max({offset - depth, prev_offset, onset + 1});
    } else {
      next_onset = offset + pause;
    }
    prev_offset = offset;
    onset = next_onset;
    length = next_length;
    speaker = next_speaker;
  }
  return canonicalize(spec.recording, std::move(segs));
}

PosteriorMatrix gen_posteriors(const Annotation &ann, double frame_shift,
                               std::span<const std::string> speakers,
                               double duration, double noise_sigma,
                               std::uint64_t seed) {
  if (!(frame_shift > 0.0)) throw std::invalid_argument("frame shift must be positive");
  if (speakers.empty()) throw std::invalid_argument("need at least one speaker column");
  const Ticks shift = seconds_to_ticks(frame_shift);
  if (shift <= 0) throw std::invalid_argument("frame shift below tick resolution");
  PosteriorMatrix p;
  p.recording = ann.recording();
  p.frame_shift = frame_shift;
  p.speakers.assign(speakers.begin(), speakers.end());
  p.frames = static_cast<std::size_t>(seconds_to_ticks(duration) / shift);
  p.values.assign(p.frames * speakers.size(), 0.0);
  for (const auto &s : ann.segments()) {
    auto col = std::find(speakers.begin(), speakers.end(), s.speaker);
    if (col == speakers.end()) continue;
    const std::size_t c = static_cast<std::size_t>(col - speakers.begin());
    // Frames whose midpoint (t + 1/2) * shift lies in [onset, offset).
    const Ticks first = std::max<Ticks>(0, s.onset / shift - 1);
    for (Ticks t = first; t < static_cast<Ticks>(p.frames); ++t) {
      const Ticks mid2 = (2 * t + 1) * shift;  // twice the midpoint
      if (mid2 < 2 * s.onset) continue;
      if (mid2 >= 2 * s.offset()) break;
      p.at(static_cast<std::size_t>(t), c) = 1.0;
    }
  }
  if (noise_sigma > 0.0) {
    Xoshiro256 rng(seed);
    for (auto &v : p.values) v = std::clamp(v + rng.normal(0.0, noise_sigma), 0.0, 1.0);
  }
  return p;
}

double overlap_fraction(const Annotation &ann) {
  std::vector<std::pair<Ticks, int>> events;
  for (const auto &s : ann.segments()) {
    events.emplace_back(s.onset, 1);
    events.emplace_back(s.offset(), -1);
  }
  std::sort(events.begin(), events.end());
  Ticks speech = 0, overlapped = 0;
  int active = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0) {
      const Ticks w = events[i].first - events[i - 1].first;
      if (active >= 1) speech += w;
      if (active >= 2) overlapped += w;
    }
    active += events[i].second;
  }
  return speech > 0 ? static_cast<double>(overlapped) / static_cast<double>(speech)
                    : 0.0;
}

void CorruptionSpec::validate() const {
  if (!(boundary_jitter_sigma >= 0.0) || !std::isfinite(boundary_jitter_sigma)) {
    throw std::invalid_argument("boundary jitter sigma must be >= 0");
  }
  for (double r : {miss_rate, false_alarm_rate, label_swap_rate, sub_rate,
                   ins_rate, del_rate}) {
    if (!is_rate(r)) throw std::invalid_argument("corruption rates must be in [0, 1]");
  }
}

Annotation corrupt_annotation(const Annotation &ann, const CorruptionSpec &spec) {
  spec.validate();
  Xoshiro256 rng(spec.seed);
  const auto speakers = ann.speakers();
  Ticks horizon = 0, total = 0;
  for (const auto &s : ann.segments()) {
    horizon = std::max(horizon, s.offset());
    total += s.duration;
  }
  const double mean_dur =
      ann.empty() ? 1.0 : ticks_to_seconds(total) / static_cast<double>(ann.size());

  std::vector<Segment> out;
  for (const auto &s : ann.segments()) {
    // Fixed draw order per segment keeps the stream aligned across settings.
    const double j_on = rng.normal(0.0, spec.boundary_jitter_sigma);
    const double j_off = rng.normal(0.0, spec.boundary_jitter_sigma);
    const bool miss = rng.bernoulli(spec.miss_rate);
    const bool swap = rng.bernoulli(spec.label_swap_rate);
    const std::size_t swap_pick = rng.index(std::max<std::size_t>(1, speakers.size() - 1));
    const bool fa = rng.bernoulli(spec.false_alarm_rate);
    const double fa_onset = rng.uniform() * ticks_to_seconds(horizon);
    const double fa_len = rng.exponential(mean_dur);
    const std::size_t fa_speaker = rng.index(speakers.size());

    if (fa) {
      out.push_back({ann.recording(), speakers[fa_speaker],
                     seconds_to_ticks(fa_onset),
                     std::max<Ticks>(1, seconds_to_ticks(fa_len))});
    }
    if (miss) continue;
    const Ticks onset = std::max<Ticks>(0, s.onset + seconds_to_ticks(j_on));
    const Ticks offset = std::max(onset + 1, s.offset() + seconds_to_ticks(j_off));
    std::string speaker = s.speaker;
    if (swap && speakers.size() > 1) {
      auto self = std::find(speakers.begin(), speakers.end(), s.speaker) - speakers.begin();
      std::size_t pick = swap_pick;
      if (pick >= static_cast<std::size_t>(self)) ++pick;
      speaker = speakers[pick];
    }
    out.push_back({ann.recording(), speaker, onset, offset - onset});
  }
  return canonicalize(ann.recording(), std::move(out));
}

std::vector<std::string> corrupt_transcript(std::span<const std::string> tokens,
                                            const CorruptionSpec &spec,
                                            std::span<const std::string> vocabulary) {
  spec.validate();
  if (vocabulary.size() < 2 && (spec.sub_rate > 0.0 || spec.ins_rate > 0.0)) {
    throw std::invalid_argument("substitution and insertion need a vocabulary "
                                "of at least two tokens");
  }
  Xoshiro256 rng(spec.seed);
  const std::size_t v = std::max<std::size_t>(vocabulary.size(), 1);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto &tok : tokens) {
    const bool del = rng.bernoulli(spec.del_rate);
    const bool sub = rng.bernoulli(spec.sub_rate);
    const std::size_t sub_pick = rng.index(v - (v > 1 ? 1 : 0));
    const bool ins = rng.bernoulli(spec.ins_rate);
    const std::size_t ins_pick = rng.index(v);
    if (!del) {
      if (sub) {
        // Skip over the original token so the substitute always differs.
        auto self = std::find(vocabulary.begin(), vocabulary.end(), tok);
        std::size_t pick = sub_pick;
        if (self != vocabulary.end() &&
            pick >= static_cast<std::size_t>(self - vocabulary.begin())) {
          ++pick;
        }
        out.push_back(vocabulary[std::min(pick, vocabulary.size() - 1)]);
      } else {
        out.push_back(tok);
      }
    }
    if (ins) out.push_back(vocabulary[ins_pick]);
  }
  return out;
}

std::vector<std::string> default_vocabulary(std::size_t size) {
  std::vector<std::string> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(encode_utf8(static_cast<char32_t>(0x4E00 + i)));
  }
  return out;
}

std::vector<std::string> gen_tokens(std::uint64_t seed, std::size_t count,
                                    std::span<const std::string> vocabulary) {
  if (vocabulary.empty()) throw std::invalid_argument("empty vocabulary");
  Xoshiro256 rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(vocabulary[rng.index(vocabulary.size())]);
  }
  return out;
}

TranscriptSet gen_transcripts(const Annotation &ann, std::uint64_t seed,
                              double chars_per_second,
                              std::span<const std::string> vocabulary) {
  TranscriptSet out;
  std::uint64_t s = seed;
  for (const auto &seg : ann.segments()) {
    // Transcript ids carry milliseconds.
    const Ticks ms = kTicksPerSecond / 1000;
    UtteranceKey key{seg.recording, seg.speaker, seg.onset / ms * ms,
                     (seg.offset() + ms - 1) / ms * ms};
    const auto n = static_cast<std::size_t>(std::max<long long>(
        1, std::llround(chars_per_second * ticks_to_seconds(seg.duration))));
    out[key] = gen_tokens(s++, n, vocabulary);
  }
  return out;
}

TranscriptSet corrupt_transcripts(const TranscriptSet &set,
                                  const CorruptionSpec &spec,
                                  std::span<const std::string> vocabulary) {
  TranscriptSet out;
  CorruptionSpec per = spec;
  for (const auto &[key, tokens] : set) {
    out[key] = corrupt_transcript(tokens, per, vocabulary);
    ++per.seed;
  }
  return out;
}

EmbeddingFixture gen_embeddings(std::uint64_t seed, std::size_t k,
                                std::size_t n_per_cluster, std::size_t dim,
                                double noise_sigma, const std::string &recording) {
  if (k < 1 || n_per_cluster < 1 || dim < 1) {
    throw std::invalid_argument("k, n_per_cluster and dim must be >= 1");
  }
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  Xoshiro256 rng(seed);
  std::vector<std::vector<double>> centers;
  for (int attempt = 0; centers.size() < k; ++attempt) {
    if (attempt > 100000) {
      throw std::runtime_error("cannot place centers with pairwise cosine < 0.3");
    }
    std::vector<double> c(dim);
    double norm = 0.0;
    for (auto &x : c) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (auto &x : c) x /= norm;
    bool ok = std::all_of(centers.begin(), centers.end(), [&](const auto &o) {
      return std::inner_product(c.begin(), c.end(), o.begin(), 0.0) < 0.3;
    });
    if (ok) centers.push_back(std::move(c));
  }

  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < k; ++c) labels.insert(labels.end(), n_per_cluster, c);
  // Fisher-Yates with the pinned stream.
  for (std::size_t i = labels.size(); i > 1; --i) {
    std::swap(labels[i - 1], labels[rng.index(i)]);
  }

  EmbeddingFixture fx;
  fx.set.recording = recording;
  fx.set.dim = dim;
  fx.labels = labels;
  const Ticks hop = seconds_to_ticks(0.75), width = seconds_to_ticks(1.5);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    EmbeddingWindow w;
    w.onset = static_cast<Ticks>(i) * hop;
    w.offset = w.onset + width;
    w.vector = centers[labels[i]];
    for (auto &x : w.vector) x += rng.normal(0.0, noise_sigma);
    fx.set.items.push_back(std::move(w));
  }
  return fx;
}

}  // namespace asdrkit
