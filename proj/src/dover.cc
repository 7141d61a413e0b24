// asdrkit/dover.cc

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

#include "asdrkit/dover.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "asdrkit/assignment.h"

namespace asdrkit {

namespace {

// Score comparisons treat differences below this as ties.
constexpr double kVoteEps = 1e-9;

using Tracks = std::map<std::string, std::vector<Interval>>;

Tracks tracks_of(const Annotation &ann) {
  Tracks t;
  for (const auto &s : ann.segments()) t[s.speaker].push_back(s.interval());
  return t;
}

// Both inputs sorted and disjoint.
Ticks overlap(const std::vector<Interval> &a, const std::vector<Interval> &b) {
  Ticks sum = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    sum += Interval{std::max(a[i].begin, b[j].begin),
                    std::min(a[i].end, b[j].end)}.length();
    if (a[i].end < b[j].end) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

std::vector<RankedHypothesis> sorted_checked(
    std::span<const RankedHypothesis> hyps) {
  if (hyps.empty()) throw std::invalid_argument("no hypotheses to fuse");
  std::vector<RankedHypothesis> out(hyps.begin(), hyps.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedHypothesis &a, const RankedHypothesis &b) {
                     return a.rank < b.rank;
                   });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].annotation.recording() != out[0].annotation.recording()) {
      throw std::invalid_argument("recording mismatch between hypotheses: '" +
                                  out[0].annotation.recording() + "' vs '" +
                                  out[i].annotation.recording() + "'");
    }
    if (out[i].rank < 1) throw std::invalid_argument("ranks must be >= 1");
    if (i > 0 && out[i].rank == out[i - 1].rank) {
      throw std::invalid_argument("duplicate rank " + std::to_string(out[i].rank));
    }
    if (!(out[i].weight > 0.0) || !std::isfinite(out[i].weight)) {
      throw std::invalid_argument("weights must be positive");
    }
  }
  return out;
}

}  // namespace

std::vector<double> rank_weights(std::span<const unsigned> ranks,
                                 double exponent) {
  std::set<unsigned> seen;
  std::vector<double> w;
  for (auto r : ranks) {
    if (r < 1) throw std::invalid_argument("ranks must be >= 1");
    if (!seen.insert(r).second) {
      throw std::invalid_argument("duplicate rank " + std::to_string(r));
    }
    w.push_back(std::pow(static_cast<double>(r), -exponent));
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto &x : w) x /= total;
  return w;
}

std::vector<RankedHypothesis> map_labels(std::span<const RankedHypothesis> hyps) {
  auto sorted = sorted_checked(hyps);
  const std::string recording = sorted[0].annotation.recording();
  Tracks anchor = tracks_of(sorted[0].annotation);

  for (std::size_t h = 1; h < sorted.size(); ++h) {
    Tracks mine = tracks_of(sorted[h].annotation);
    std::vector<std::string> my_labels, anchor_labels;
    for (const auto &[k, _] : mine) my_labels.push_back(k);
    for (const auto &[k, _] : anchor) anchor_labels.push_back(k);

    std::map<std::string, std::string> rename;
    if (!my_labels.empty() && !anchor_labels.empty()) {
      CostMatrix cost(my_labels.size(), anchor_labels.size());
      for (std::size_t i = 0; i < my_labels.size(); ++i)
        for (std::size_t j = 0; j < anchor_labels.size(); ++j)
          cost(i, j) = -static_cast<double>(
              overlap(mine[my_labels[i]], anchor[anchor_labels[j]]));
      for (const auto &[i, j] : solve_min_cost(cost).pairs) {
        if (cost(i, j) < 0.0) rename[my_labels[i]] = anchor_labels[j];
      }
    }
    for (const auto &label : my_labels) {
      if (rename.contains(label)) continue;
      std::string fresh = label;
      for (unsigned suffix = sorted[h].rank; anchor.contains(fresh); ++suffix) {
        fresh = label + "." + std::to_string(suffix);
      }
      rename[label] = fresh;
      anchor[fresh] = mine[label];
    }

    std::vector<Segment> segs;
    for (const auto &s : sorted[h].annotation.segments()) {
      segs.push_back({recording, rename[s.speaker], s.onset, s.duration});
    }
    sorted[h].annotation = canonicalize(recording, std::move(segs));
  }
  return sorted;
}

Annotation fuse(std::span<const RankedHypothesis> hyps) {
  auto mapped = map_labels(hyps);
  const std::string recording = mapped[0].annotation.recording();
  const std::size_t k = mapped.size();

  double weight_sum = 0.0;
  for (const auto &h : mapped) weight_sum += h.weight;
  std::vector<double> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = mapped[i].weight / weight_sum;

  std::vector<std::string> labels;
  for (const auto &h : mapped)
    for (const auto &s : h.annotation.segments()) labels.push_back(s.speaker);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto label_index = [&](const std::string &l) {
    return static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), l) - labels.begin());
  };

  struct Event {
    Ticks time;
    bool start;
    std::size_t hyp;
    std::size_t label;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < k; ++i) {
    for (const auto &s : mapped[i].annotation.segments()) {
      const std::size_t l = label_index(s.speaker);
      events.push_back({s.onset, true, i, l});
      events.push_back({s.offset(), false, i, l});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const Event &a, const Event &b) { return a.time < b.time; });

  const std::size_t num_labels = labels.size();
  std::vector<char> active(k * num_labels, 0);
  std::vector<std::size_t> count(k, 0);
  std::vector<double> score(num_labels);
  std::vector<long long> votes(num_labels);
  std::vector<std::size_t> order(num_labels);
  std::vector<Segment> out;

  for (std::size_t e = 0; e < events.size();) {
    const Ticks t0 = events[e].time;
    for (; e < events.size() && events[e].time == t0; ++e) {
      const auto &ev = events[e];
      char &flag = active[ev.hyp * num_labels + ev.label];
      if (ev.start && !flag) {
        flag = 1;
        ++count[ev.hyp];
      } else if (!ev.start && flag) {
        flag = 0;
        --count[ev.hyp];
      }
    }
    if (e == events.size()) break;
    const Ticks t1 = events[e].time;

    double expected = 0.0;
    for (std::size_t i = 0; i < k; ++i) expected += w[i] * static_cast<double>(count[i]);
    const auto n_out = static_cast<std::size_t>(std::floor(expected + 0.5 + kVoteEps));
    if (n_out == 0) continue;

    std::fill(score.begin(), score.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t l = 0; l < num_labels; ++l)
        if (active[i * num_labels + l]) score[l] += w[i];
    // Quantized so that sums differing only by round-off compare equal.
    for (std::size_t l = 0; l < num_labels; ++l) {
      votes[l] = std::llround(score[l] / kVoteEps);
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    // labels are sorted, so index order is lexicographic order
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return votes[a] > votes[b];
    });
    for (std::size_t r = 0; r < std::min(n_out, num_labels); ++r) {
      if (votes[order[r]] <= 0) break;
      out.push_back({recording, labels[order[r]], t0, t1 - t0});
    }
  }
  return canonicalize(recording, std::move(out));
}

}  // namespace asdrkit
