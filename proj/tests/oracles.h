// tests/oracles.h

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

// Slow, obviously-correct reference implementations shared by the unit and
// acceptance tests. None of them reuse library code beyond plain data types.

#ifndef ASDRKIT_TESTS_ORACLES_H_
#define ASDRKIT_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asdrkit/formats.h"
#include "asdrkit/random.h"
#include "asdrkit/timeline.h"

namespace asdrkit::oracle {

inline constexpr Ticks kMs = kTicksPerSecond / 1000;

// Random annotation whose boundaries all lie on the 1 ms grid. Segments of
// different speakers overlap freely.
inline Annotation random_ms_annotation(Xoshiro256 &rng, const std::string &rec,
                                       std::size_t max_speakers,
                                       double max_seconds,
                                       const std::string &prefix = "s") {
  const std::size_t n_spk = 1 + rng.index(max_speakers);
  const Ticks horizon_ms =
      static_cast<Ticks>((0.25 + 0.75 * rng.uniform()) * max_seconds * 1000.0);
  std::vector<Segment> segs;
  for (std::size_t s = 0; s < n_spk; ++s) {
    const std::size_t n_seg = rng.index(12);
    for (std::size_t i = 0; i < n_seg; ++i) {
      Ticks on = static_cast<Ticks>(rng.index(static_cast<std::size_t>(horizon_ms)));
      Ticks len = 1 + static_cast<Ticks>(rng.index(15000));
      len = std::min(len, horizon_ms - on);
      if (len <= 0) continue;
      segs.push_back({rec, prefix + std::to_string(s), on * kMs, len * kMs});
    }
  }
  return canonicalize(rec, std::move(segs));
}

struct GridDer {
  Ticks scored = 0, missed = 0, false_alarm = 0, confusion = 0;
};

// Maximum of sum overlap[r][assign[r]] over injective partial maps.
inline Ticks best_injection(const std::vector<std::vector<Ticks>> &overlap,
                            std::size_t r, std::vector<char> &used) {
  if (r == overlap.size()) return 0;
  Ticks best = best_injection(overlap, r + 1, used);
  for (std::size_t h = 0; h < used.size(); ++h) {
    if (used[h]) continue;
    used[h] = 1;
    best = std::max(best, overlap[r][h] + best_injection(overlap, r + 1, used));
    used[h] = 0;
  }
  return best;
}

// Total overlap between one reference and one hypothesis speaker.
inline Ticks pair_overlap(const Annotation &ref, const std::string &r,
                          const Annotation &hyp, const std::string &h) {
  Ticks sum = 0;
  for (const auto &a : ref.segments()) {
    if (a.speaker != r) continue;
    for (const auto &b : hyp.segments()) {
      if (b.speaker != h) continue;
      sum += Interval{std::max(a.onset, b.onset), std::min(a.offset(), b.offset())}
                 .length();
    }
  }
  return sum;
}

// Exhaustive maximum of total overlap over injective speaker maps.
inline Ticks best_total_overlap(const Annotation &ref, const Annotation &hyp) {
  auto rs = ref.speakers(), hs = hyp.speakers();
  std::vector<std::vector<Ticks>> ov(rs.size(), std::vector<Ticks>(hs.size()));
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < hs.size(); ++j)
      ov[i][j] = pair_overlap(ref, rs[i], hyp, hs[j]);
  std::vector<char> used(hs.size(), 0);
  return best_injection(ov, 0, used);
}

// DER by integration over 1 ms cells; every boundary must lie on the grid.
// The speaker mapping is the exhaustive maximum over the scored cells.
inline GridDer grid_der(const Annotation &ref, const Annotation &hyp,
                        double collar, bool score_overlap,
                        const std::vector<Interval> *regions = nullptr) {
  Ticks end = 0;
  for (const auto &s : ref.segments()) end = std::max(end, s.offset());
  for (const auto &s : hyp.segments()) end = std::max(end, s.offset());
  const std::size_t cells = static_cast<std::size_t>(end / kMs) + 1;

  auto paint = [&](const Annotation &a, std::vector<std::string> &names) {
    std::map<std::string, std::size_t> idx;
    for (const auto &s : a.segments()) idx.emplace(s.speaker, 0);
    for (auto &[k, v] : idx) {
      v = names.size();
      names.push_back(k);
    }
    std::vector<std::vector<char>> act(names.size(), std::vector<char>(cells, 0));
    for (const auto &s : a.segments()) {
      for (Ticks c = s.onset / kMs; c < s.offset() / kMs; ++c) {
        act[idx[s.speaker]][static_cast<std::size_t>(c)] = 1;
      }
    }
    return act;
  };
  std::vector<std::string> rn, hn;
  auto ra = paint(ref, rn);
  auto ha = paint(hyp, hn);

  std::vector<char> scored(cells, 1);
  const Ticks half = static_cast<Ticks>(collar * kTicksPerSecond / 2.0 + 0.5);
  if (half > 0) {
    for (const auto &s : ref.segments()) {
      for (Ticks b : {s.onset, s.offset()}) {
        for (Ticks c = std::max<Ticks>(0, b - half) / kMs; c < (b + half) / kMs &&
                                                           c < static_cast<Ticks>(cells);
             ++c) {
          scored[static_cast<std::size_t>(c)] = 0;
        }
      }
    }
  }
  if (regions) {
    std::vector<char> in(cells, 0);
    for (const auto &iv : *regions) {
      for (Ticks c = iv.begin / kMs; c < iv.end / kMs && c < static_cast<Ticks>(cells); ++c) {
        in[static_cast<std::size_t>(c)] = 1;
      }
    }
    for (std::size_t c = 0; c < cells; ++c) scored[c] = scored[c] && in[c];
  }

  GridDer g;
  std::vector<std::vector<Ticks>> ov(rn.size(), std::vector<Ticks>(hn.size(), 0));
  Ticks min_sum = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (!scored[c]) continue;
    Ticks nr = 0, nh = 0;
    for (const auto &r : ra) nr += r[c];
    for (const auto &h : ha) nh += h[c];
    if (!score_overlap && nr > 1) continue;
    g.scored += nr * kMs;
    g.missed += std::max<Ticks>(0, nr - nh) * kMs;
    g.false_alarm += std::max<Ticks>(0, nh - nr) * kMs;
    min_sum += std::min(nr, nh) * kMs;
    for (std::size_t i = 0; i < rn.size(); ++i)
      for (std::size_t j = 0; j < hn.size(); ++j)
        if (ra[i][c] && ha[j][c]) ov[i][j] += kMs;
  }
  std::vector<char> used(hn.size(), 0);
  g.confusion = min_sum - best_injection(ov, 0, used);
  return g;
}

// Plain Levenshtein distance by exhaustive recursion. The only pruning is a
// bound that cannot exclude an optimum: the remaining length difference.
inline std::size_t edit_recursion(const std::vector<std::string> &a, std::size_t i,
                                  const std::vector<std::string> &b, std::size_t j,
                                  std::size_t spent, std::size_t &best) {
  const std::size_t ra = a.size() - i, rb = b.size() - j;
  const std::size_t floor = ra > rb ? ra - rb : rb - ra;
  if (spent + floor >= best) return best;
  if (ra == 0 || rb == 0) {
    best = spent + ra + rb;
    return best;
  }
  const std::size_t sub = a[i] == b[j] ? 0 : 1;
  edit_recursion(a, i + 1, b, j + 1, spent + sub, best);
  edit_recursion(a, i + 1, b, j, spent + 1, best);
  edit_recursion(a, i, b, j + 1, spent + 1, best);
  return best;
}

inline std::size_t exhaustive_edit_distance(const std::vector<std::string> &a,
                                            const std::vector<std::string> &b) {
  std::size_t best = std::max(a.size(), b.size()) + 1;
  return edit_recursion(a, 0, b, 0, 0, best);
}

// Full-matrix Levenshtein with an explicit backtrace preferring
// substitution/match, then deletion, then insertion. Returns {S, D, I}.
struct Sdi {
  std::size_t s = 0, d = 0, i = 0;
};
inline Sdi backtrace_counts(const std::vector<std::string> &ref,
                            const std::vector<std::string> &hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<std::size_t>> c(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) c[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) c[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      c[i][j] = std::min({c[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u),
                          c[i - 1][j] + 1, c[i][j - 1] + 1});
  Sdi out;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        c[i][j] == c[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u)) {
      if (ref[i - 1] != hyp[j - 1]) ++out.s;
      --i;
      --j;
    } else if (i > 0 && c[i][j] == c[i - 1][j] + 1) {
      ++out.d;
      --i;
    } else {
      ++out.i;
      --j;
    }
  }
  return out;
}

// Minimum total errors over every injective partial map of reference
// streams onto hypothesis streams; unmatched streams cost their length.
inline std::size_t min_permutation_errors(
    const std::vector<std::vector<std::string>> &ref,
    const std::vector<std::vector<std::string>> &hyp, std::size_t r,
    std::vector<char> &used) {
  if (r == ref.size()) {
    std::size_t rest = 0;
    for (std::size_t h = 0; h < hyp.size(); ++h)
      if (!used[h]) rest += hyp[h].size();
    return rest;
  }
  std::size_t best =
      ref[r].size() + min_permutation_errors(ref, hyp, r + 1, used);
  for (std::size_t h = 0; h < hyp.size(); ++h) {
    if (used[h]) continue;
    used[h] = 1;
    best = std::min(best, exhaustive_edit_distance(ref[r], hyp[h]) +
                              min_permutation_errors(ref, hyp, r + 1, used));
    used[h] = 0;
  }
  return best;
}

}  // namespace asdrkit::oracle

#endif  // ASDRKIT_TESTS_ORACLES_H_
