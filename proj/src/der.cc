// asdrkit/der.cc

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

#include "asdrkit/der.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "asdrkit/assignment.h"
#include "asdrkit/parallel.h"

namespace asdrkit {

std::optional<double> DerReport::der() const {
  if (scored_speech <= 0) return std::nullopt;
  return static_cast<double>(errors()) / static_cast<double>(scored_speech);
}

DerReport &DerReport::operator+=(const DerReport &other) {
  scored_speech += other.scored_speech;
  missed += other.missed;
  false_alarm += other.false_alarm;
  confusion += other.confusion;
  return *this;
}

namespace {

// One elementary interval of the sweep: constant speaker activity.
struct Piece {
  Ticks width;
  std::vector<std::size_t> ref_active;
  std::vector<std::size_t> hyp_active;
};

struct SpeakerIndex {
  std::vector<std::string> labels;
  std::size_t of(const std::string &label) const {
    return static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
  }
};

// Sweeps ref and hyp over the scored intervals (nullptr = everywhere).
std::vector<Piece> sweep(const Annotation &ref, const Annotation &hyp,
                         const SpeakerIndex &ref_idx,
                         const SpeakerIndex &hyp_idx,
                         const std::vector<Interval> *scored) {
  struct Event {
    Ticks time;
    bool start;
    bool is_ref;
    std::size_t speaker;
  };
  std::vector<Event> events;
  events.reserve(2 * (ref.size() + hyp.size()));
  for (const auto &s : ref.segments()) {
    std::size_t k = ref_idx.of(s.speaker);
    events.push_back({s.onset, true, true, k});
    events.push_back({s.offset(), false, true, k});
  }
  for (const auto &s : hyp.segments()) {
    std::size_t k = hyp_idx.of(s.speaker);
    events.push_back({s.onset, true, false, k});
    events.push_back({s.offset(), false, false, k});
  }
  std::sort(events.begin(), events.end(),
            [](const Event &a, const Event &b) { return a.time < b.time; });

  std::vector<Ticks> cuts;
  cuts.reserve(events.size() + (scored ? 2 * scored->size() : 0));
  for (const auto &e : events) cuts.push_back(e.time);
  if (scored) {
    for (const auto &iv : *scored) {
      cuts.push_back(iv.begin);
      cuts.push_back(iv.end);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<char> ref_on(ref_idx.labels.size(), 0);
  std::vector<char> hyp_on(hyp_idx.labels.size(), 0);
  std::vector<Piece> pieces;
  std::size_t ev = 0, region = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const Ticks t0 = cuts[c], t1 = cuts[c + 1];
    for (; ev < events.size() && events[ev].time == t0; ++ev) {
      auto &flags = events[ev].is_ref ? ref_on : hyp_on;
      flags[events[ev].speaker] = events[ev].start ? 1 : 0;
    }
    if (scored) {
      while (region < scored->size() && (*scored)[region].end <= t0) ++region;
      if (region == scored->size()) break;
      if ((*scored)[region].begin > t0) continue;
    }
    Piece p{t1 - t0, {}, {}};
    for (std::size_t k = 0; k < ref_on.size(); ++k)
      if (ref_on[k]) p.ref_active.push_back(k);
    for (std::size_t k = 0; k < hyp_on.size(); ++k)
      if (hyp_on[k]) p.hyp_active.push_back(k);
    if (p.ref_active.empty() && p.hyp_active.empty()) continue;
    pieces.push_back(std::move(p));
  }
  return pieces;
}

// Optimal injective map ref -> hyp by total overlap; -1 marks unmapped.
std::vector<long> map_speakers(const std::vector<Piece> &pieces,
                               std::size_t num_ref, std::size_t num_hyp) {
  std::vector<long> mapping(num_ref, -1);
  if (num_ref == 0 || num_hyp == 0) return mapping;
  CostMatrix overlap(num_ref, num_hyp, 0.0);
  for (const auto &p : pieces)
    for (auto r : p.ref_active)
      for (auto h : p.hyp_active) overlap(r, h) -= static_cast<double>(p.width);
  for (const auto &[r, h] : solve_min_cost(overlap).pairs) {
    if (overlap(r, h) < 0.0) mapping[r] = static_cast<long>(h);
  }
  return mapping;
}

SpeakerMap to_speaker_map(const std::vector<long> &mapping,
                          const SpeakerIndex &ref_idx,
                          const SpeakerIndex &hyp_idx) {
  SpeakerMap out;
  for (std::size_t r = 0; r < mapping.size(); ++r) {
    if (mapping[r] >= 0) {
      out.emplace_back(ref_idx.labels[r],
                       hyp_idx.labels[static_cast<std::size_t>(mapping[r])]);
    }
  }
  return out;
}

void check_same_recording(const Annotation &ref, const Annotation &hyp) {
  if (ref.recording() != hyp.recording()) {
    throw std::invalid_argument("recording mismatch: '" + ref.recording() +
                                "' vs '" + hyp.recording() + "'");
  }
}

DerReport der_impl(const Annotation &ref, const Annotation &hyp,
                   const DerOptions &opts, const ScoringRegionSet *regions) {
  check_same_recording(ref, hyp);
  if (!(opts.collar >= 0.0) || !std::isfinite(opts.collar)) {
    throw std::invalid_argument("collar must be non-negative");
  }
  SpeakerIndex ref_idx{ref.speakers()}, hyp_idx{hyp.speakers()};

  std::vector<Interval> scored;
  if (regions) {
    scored.assign(regions->regions().begin(), regions->regions().end());
  } else {
    scored.push_back({std::numeric_limits<Ticks>::min() / 4,
                      std::numeric_limits<Ticks>::max() / 4});
  }
  const Ticks half = seconds_to_ticks(opts.collar / 2.0);
  if (half > 0) {
    std::vector<Interval> zones;
    for (const auto &s : ref.segments()) {
      zones.push_back({s.onset - half, s.onset + half});
      zones.push_back({s.offset() - half, s.offset() + half});
    }
    scored = interval_difference(scored, interval_union(std::move(zones)));
  }

  auto pieces = sweep(ref, hyp, ref_idx, hyp_idx, &scored);
  if (!opts.score_overlap) {
    std::erase_if(pieces, [](const Piece &p) { return p.ref_active.size() > 1; });
  }
  auto mapping = map_speakers(pieces, ref_idx.labels.size(), hyp_idx.labels.size());

  DerReport rep;
  rep.recording = ref.recording();
  for (const auto &p : pieces) {
    const Ticks nr = static_cast<Ticks>(p.ref_active.size());
    const Ticks nh = static_cast<Ticks>(p.hyp_active.size());
    Ticks correct = 0;
    for (auto r : p.ref_active) {
      long h = mapping[r];
      if (h >= 0 && std::binary_search(p.hyp_active.begin(), p.hyp_active.end(),
                                       static_cast<std::size_t>(h))) {
        ++correct;
      }
    }
    rep.scored_speech += p.width * nr;
    rep.missed += p.width * std::max<Ticks>(0, nr - nh);
    rep.false_alarm += p.width * std::max<Ticks>(0, nh - nr);
    rep.confusion += p.width * (std::min(nr, nh) - correct);
  }
  rep.speaker_map = to_speaker_map(mapping, ref_idx, hyp_idx);
  return rep;
}

}  // namespace

SpeakerMap optimal_speaker_mapping(const Annotation &ref,
                                   const Annotation &hyp) {
  check_same_recording(ref, hyp);
  SpeakerIndex ref_idx{ref.speakers()}, hyp_idx{hyp.speakers()};
  auto pieces = sweep(ref, hyp, ref_idx, hyp_idx, nullptr);
  return to_speaker_map(
      map_speakers(pieces, ref_idx.labels.size(), hyp_idx.labels.size()),
      ref_idx, hyp_idx);
}

DerReport compute_der(const Annotation &ref, const Annotation &hyp,
                      const DerOptions &opts) {
  return der_impl(ref, hyp, opts, nullptr);
}

DerReport compute_der(const Annotation &ref, const Annotation &hyp,
                      const DerOptions &opts, const ScoringRegionSet &regions) {
  return der_impl(ref, hyp, opts, &regions);
}

CorpusDer score_corpus(const AnnotationSet &ref, const AnnotationSet &hyp,
                       const DerOptions &opts,
                       const std::map<std::string, ScoringRegionSet> *uem,
                       std::size_t threads) {
  std::vector<std::string> recs;
  for (const auto &[rec, _] : ref) recs.push_back(rec);
  for (const auto &[rec, _] : hyp) recs.push_back(rec);
  std::sort(recs.begin(), recs.end());
  recs.erase(std::unique(recs.begin(), recs.end()), recs.end());

  CorpusDer out;
  out.recordings.resize(recs.size());
  parallel_for(recs.size(), threads, [&](std::size_t i) {
    const std::string &rec = recs[i];
    auto r = ref.find(rec);
    auto h = hyp.find(rec);
    Annotation r_ann = r != ref.end() ? r->second : canonicalize(rec, {});
    Annotation h_ann = h != hyp.end() ? h->second : canonicalize(rec, {});
    const ScoringRegionSet *regions = nullptr;
    if (uem) {
      auto u = uem->find(rec);
      if (u != uem->end()) regions = &u->second;
    }
    out.recordings[i] = der_impl(r_ann, h_ann, opts, regions);
  });
  for (const auto &r : out.recordings) out.total += r;
  return out;
}

double absolute_reduction(double baseline, double system) {
  const long long cents = std::llround(baseline * 100.0) -
                          std::llround(system * 100.0);
  return static_cast<double>(cents) / 100.0;
}

std::string format_percent(double pct) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", pct);
  return buf;
}

}  // namespace asdrkit
