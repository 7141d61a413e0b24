// asdrkit/timeline.cc

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

#include "asdrkit/timeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace asdrkit {

namespace {

constexpr int kTickDecimals = 4;
// Keeps every tick count far away from int64 overflow (about 31 years).
constexpr Ticks kMaxTicks = Ticks{1} << 52;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace

std::optional<Ticks> parse_ticks(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  // Mantissa digits without the point; `point` digits precede the point.
  std::string digits;
  long long point = 0;
  std::size_t mantissa_digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    if (!digits.empty() || text[pos] != '0') {
      digits.push_back(text[pos]);
      ++point;
    }
    ++pos;
    ++mantissa_digits;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (!digits.empty() || text[pos] != '0') {
        digits.push_back(text[pos]);
      } else {
        --point;
      }
      ++pos;
      ++mantissa_digits;
    }
  }
  if (mantissa_digits == 0) return std::nullopt;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    long long exponent = 0;
    std::size_t exp_digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      exponent = std::min(exponent * 10 + (text[pos] - '0'), 1000000LL);
      ++pos;
      ++exp_digits;
    }
    if (exp_digits == 0) return std::nullopt;
    point += exp_negative ? -exponent : exponent;
  }
  if (pos != text.size()) return std::nullopt;
  if (digits.empty()) return Ticks{0};

  // Digits [0, cut) are whole ticks; digit `cut` decides the rounding.
  const long long cut = point + kTickDecimals;
  if (cut > 17) return std::nullopt;
  Ticks magnitude = 0;
  for (long long i = 0; i < cut; ++i) {
    const int d = i < static_cast<long long>(digits.size()) ? digits[i] - '0' : 0;
    magnitude = magnitude * 10 + d;
  }
  if (magnitude > kMaxTicks) return std::nullopt;
  int round_digit = 0;
  bool sticky = false;
  for (long long i = std::max(cut, 0LL); i < static_cast<long long>(digits.size()); ++i) {
    if (i == cut) {
      round_digit = digits[i] - '0';
    } else if (digits[i] != '0') {
      sticky = true;
    }
  }
  if (cut < 0) sticky = true;  // all digits lie below the rounding digit
  if (!negative) {
    if (round_digit >= 5) ++magnitude;
    return magnitude;
  }
  // floor(-x + 0.5): only strictly-above-half remainders move away from zero.
  if (round_digit > 5 || (round_digit == 5 && sticky)) ++magnitude;
  return -magnitude;
}

Ticks seconds_to_ticks(double seconds) {
  if (!std::isfinite(seconds)) {
    throw std::invalid_argument("non-finite time value");
  }
  // Shortest round-trip decimal form, then exact decimal rounding; avoids
  // 0.00015 * 1e4 == 1.4999999 style surprises.
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), seconds);
  auto ticks = parse_ticks(std::string_view(buf, res.ptr - buf));
  if (!ticks) throw std::invalid_argument("time value out of range");
  return *ticks;
}

std::string format_ticks(Ticks t) {
  std::string out;
  if (t < 0) {
    out.push_back('-');
    t = -t;
  }
  out += std::to_string(t / kTicksPerSecond);
  out.push_back('.');
  std::string frac = std::to_string(t % kTicksPerSecond);
  out.append(kTickDecimals - frac.size(), '0');
  out += frac;
  return out;
}

bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::none_of(label.begin(), label.end(), is_space);
}

std::vector<std::string> Annotation::speakers() const {
  std::vector<std::string> out;
  out.reserve(segments_.size());
  for (const auto &s : segments_) out.push_back(s.speaker);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Annotation canonicalize(std::vector<Segment> segments) {
  std::string recording = segments.empty() ? "" : segments.front().recording;
  return canonicalize(recording, std::move(segments));
}

Annotation canonicalize(std::string_view recording,
                        std::vector<Segment> segments) {
  std::vector<std::string> bad_ids;
  for (const auto &s : segments) {
    if (s.recording != recording &&
        std::find(bad_ids.begin(), bad_ids.end(), s.recording) ==
            bad_ids.end()) {
      bad_ids.push_back(s.recording);
    }
  }
  if (!bad_ids.empty()) {
    std::string msg = "mixed recording ids: expected '" +
                      std::string(recording) + "', got";
    for (const auto &id : bad_ids) msg += " '" + id + "'";
    throw std::invalid_argument(msg);
  }
  for (const auto &s : segments) {
    if (!is_valid_label(s.recording) || !is_valid_label(s.speaker)) {
      throw std::invalid_argument("segment labels must be non-empty and "
                                  "contain no whitespace");
    }
    if (s.onset < 0) {
      throw std::invalid_argument("negative segment onset");
    }
    if (s.duration <= 0) {
      throw std::invalid_argument("non-positive segment duration");
    }
  }

  // Per-speaker merge of overlapping or abutting turns.
  std::sort(segments.begin(), segments.end(),
            [](const Segment &a, const Segment &b) {
              if (a.speaker != b.speaker) return a.speaker < b.speaker;
              if (a.onset != b.onset) return a.onset < b.onset;
              return a.duration < b.duration;
            });
  std::vector<Segment> merged;
  merged.reserve(segments.size());
  for (auto &s : segments) {
    if (!merged.empty() && merged.back().speaker == s.speaker &&
        s.onset <= merged.back().offset()) {
      Ticks end = std::max(merged.back().offset(), s.offset());
      merged.back().duration = end - merged.back().onset;
    } else {
      merged.push_back(std::move(s));
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const Segment &a, const Segment &b) {
              if (a.onset != b.onset) return a.onset < b.onset;
              if (a.speaker != b.speaker) return a.speaker < b.speaker;
              return a.duration < b.duration;
            });

  Annotation ann;
  ann.recording_ = std::string(recording);
  ann.segments_ = std::move(merged);
  return ann;
}

ScoringRegionSet::ScoringRegionSet(std::string recording,
                                   std::vector<Interval> regions)
    : recording_(std::move(recording)), regions_(std::move(regions)) {
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].end <= regions_[i].begin) {
      throw std::invalid_argument("scoring region with offset <= onset");
    }
    if (i > 0 && regions_[i].begin < regions_[i - 1].end) {
      throw std::invalid_argument("overlapping scoring regions");
    }
  }
}

Ticks ScoringRegionSet::total() const {
  Ticks sum = 0;
  for (const auto &r : regions_) sum += r.length();
  return sum;
}

Ticks intersect_length(Interval iv, std::span<const Interval> regions) {
  // First region whose end lies after iv.begin.
  auto it = std::upper_bound(
      regions.begin(), regions.end(), iv.begin,
      [](Ticks t, const Interval &r) { return t < r.end; });
  Ticks sum = 0;
  for (; it != regions.end() && it->begin < iv.end; ++it) {
    sum += Interval{std::max(iv.begin, it->begin), std::min(iv.end, it->end)}
               .length();
  }
  return sum;
}

std::vector<Interval> interval_union(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end());
  std::vector<Interval> out;
  for (const auto &iv : intervals) {
    if (iv.length() == 0) continue;
    if (!out.empty() && iv.begin <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<Interval> interval_difference(std::span<const Interval> a,
                                          std::span<const Interval> b) {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto &iv : a) {
    Ticks cur = iv.begin;
    while (j < b.size() && b[j].end <= cur) ++j;
    std::size_t k = j;
    while (k < b.size() && b[k].begin < iv.end) {
      if (b[k].begin > cur) out.push_back({cur, b[k].begin});
      cur = std::max(cur, b[k].end);
      if (b[k].end > iv.end) break;
      ++k;
    }
    if (cur < iv.end) out.push_back({cur, iv.end});
  }
  return out;
}

Ticks total_speech(const Annotation &ann) {
  Ticks sum = 0;
  for (const auto &s : ann.segments()) sum += s.duration;
  return sum;
}

Ticks total_speech(const Annotation &ann, const ScoringRegionSet &regions) {
  Ticks sum = 0;
  for (const auto &s : ann.segments()) {
    sum += intersect_length(s.interval(), regions.regions());
  }
  return sum;
}

}  // namespace asdrkit
