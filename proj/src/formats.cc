// asdrkit/formats.cc

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

#include "asdrkit/formats.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace asdrkit {

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string &reason)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + reason),
      line_(line),
      column_(column),
      reason_(reason) {}

namespace {

constexpr std::size_t kMaxEmbeddingDim = 1 << 16;

struct Line {
  std::string_view text;
  std::size_t number;
};

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0, number = 1;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({line, number++});
    start = nl + 1;
  }
  return lines;
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<Field> split_whitespace(std::string_view line) {
  std::vector<Field> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_blank(line[j])) ++j;
    fields.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return fields;
}

std::vector<Field> split_on(std::string_view line, char sep) {
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t p = line.find(sep, start);
    if (p == std::string_view::npos) {
      fields.push_back({line.substr(start), start + 1});
      break;
    }
    fields.push_back({line.substr(start, p - start), start + 1});
    start = p + 1;
  }
  return fields;
}

bool is_blank_line(std::string_view line) {
  return std::all_of(line.begin(), line.end(), is_blank);
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Ticks require_ticks(const Line &line, const Field &f, const char *what) {
  auto t = parse_ticks(f.text);
  if (!t) {
    throw ParseError(line.number, f.column,
                     std::string("non-numeric ") + what + " '" +
                         std::string(f.text) + "'");
  }
  return *t;
}

std::string slurp(std::istream &in) {
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

// ---------------------------------------------------------------- RTTM

AnnotationSet parse_rttm(std::string_view text) {
  std::map<std::string, std::vector<Segment>> by_rec;
  for (const auto &line : split_lines(text)) {
    if (is_blank_line(line.text)) continue;
    auto fields = split_whitespace(line.text);
    if (fields[0].text.substr(0, 2) == ";;") continue;
    if (fields[0].text != "SPEAKER") continue;
    if (fields.size() != 10) {
      throw ParseError(line.number, 1,
                       "malformed field count: expected 10, got " +
                           std::to_string(fields.size()));
    }
    Ticks onset = require_ticks(line, fields[3], "onset");
    Ticks duration = require_ticks(line, fields[4], "duration");
    if (onset < 0) throw ParseError(line.number, fields[3].column, "negative onset");
    if (duration <= 0) {
      throw ParseError(line.number, fields[4].column, "non-positive duration");
    }
    std::string rec(fields[1].text);
    by_rec[rec].push_back({rec, std::string(fields[7].text), onset, duration});
  }
  AnnotationSet out;
  for (auto &[rec, segs] : by_rec) {
    out.emplace(rec, canonicalize(rec, std::move(segs)));
  }
  return out;
}

AnnotationSet parse_rttm(std::istream &in) { return parse_rttm(slurp(in)); }

std::string emit_rttm(const Annotation &ann) {
  std::string out;
  for (const auto &s : ann.segments()) {
    out += "SPEAKER " + s.recording + " 1 " + format_ticks(s.onset) + " " +
           format_ticks(s.duration) + " <NA> <NA> " + s.speaker +
           " <NA> <NA>\n";
  }
  return out;
}

std::string emit_rttm(const AnnotationSet &anns) {
  std::string out;
  for (const auto &[rec, ann] : anns) out += emit_rttm(ann);
  return out;
}

// ---------------------------------------------------------------- UEM

std::map<std::string, ScoringRegionSet> parse_uem(std::string_view text) {
  struct Entry {
    Interval iv;
    std::size_t line;
  };
  std::map<std::string, std::vector<Entry>> by_rec;
  for (const auto &line : split_lines(text)) {
    if (is_blank_line(line.text)) continue;
    auto fields = split_whitespace(line.text);
    if (fields[0].text.substr(0, 2) == ";;") continue;
    if (fields.size() != 4) {
      throw ParseError(line.number, 1,
                       "malformed field count: expected 4, got " +
                           std::to_string(fields.size()));
    }
    Ticks onset = require_ticks(line, fields[2], "onset");
    Ticks offset = require_ticks(line, fields[3], "offset");
    if (onset < 0) throw ParseError(line.number, fields[2].column, "negative onset");
    if (offset <= onset) {
      throw ParseError(line.number, fields[3].column,
                       "scoring region offset must exceed onset");
    }
    by_rec[std::string(fields[0].text)].push_back({{onset, offset}, line.number});
  }
  std::map<std::string, ScoringRegionSet> out;
  for (auto &[rec, entries] : by_rec) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry &a, const Entry &b) { return a.iv < b.iv; });
    std::vector<Interval> regions;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i > 0 && entries[i].iv.begin < entries[i - 1].iv.end) {
        std::size_t where = std::max(entries[i].line, entries[i - 1].line);
        throw ParseError(where, 1, "overlapping scoring regions");
      }
      regions.push_back(entries[i].iv);
    }
    out.emplace(rec, ScoringRegionSet(rec, std::move(regions)));
  }
  return out;
}

std::map<std::string, ScoringRegionSet> parse_uem(std::istream &in) {
  return parse_uem(slurp(in));
}

std::string emit_uem(const std::map<std::string, ScoringRegionSet> &uem) {
  std::string out;
  for (const auto &[rec, set] : uem) {
    for (const auto &r : set.regions()) {
      out += rec + " 1 " + format_ticks(r.begin) + " " + format_ticks(r.end) +
             "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------- posteriors

PosteriorMatrix parse_posteriors(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing #posteriors header");
  auto header = split_whitespace(lines[0].text);
  if (header.empty() || header[0].text != "#posteriors") {
    throw ParseError(1, 1, "missing #posteriors header");
  }
  if (header.size() < 4) {
    throw ParseError(1, 1, "header needs recording, frame shift and at least "
                           "one speaker");
  }
  PosteriorMatrix p;
  p.recording = std::string(header[1].text);
  auto shift = parse_double(header[2].text);
  if (!shift || !std::isfinite(*shift) || *shift <= 0.0) {
    throw ParseError(1, header[2].column, "frame shift must be a positive number");
  }
  p.frame_shift = *shift;
  std::set<std::string_view> seen;
  for (std::size_t i = 3; i < header.size(); ++i) {
    if (!seen.insert(header[i].text).second) {
      throw ParseError(1, header[i].column,
                       "duplicate speaker '" + std::string(header[i].text) + "'");
    }
    p.speakers.emplace_back(header[i].text);
  }
  const std::size_t num_spk = p.speakers.size();
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto &line = lines[li];
    std::size_t frame = li - 1;
    auto fields = split_on(line.text, '\t');
    if (fields.size() != num_spk) {
      throw ParseError(line.number, 1,
                       "ragged row at frame " + std::to_string(frame) +
                           ": expected " + std::to_string(num_spk) +
                           " values, got " + std::to_string(fields.size()));
    }
    for (const auto &f : fields) {
      auto v = parse_double(f.text);
      if (!v) {
        throw ParseError(line.number, f.column,
                         "non-numeric value at frame " + std::to_string(frame));
      }
      if (!(*v >= 0.0 && *v <= 1.0)) {
        throw ParseError(line.number, f.column,
                         "probability out of range at frame " +
                             std::to_string(frame));
      }
      p.values.push_back(*v);
    }
    ++p.frames;
  }
  return p;
}

PosteriorMatrix parse_posteriors(std::istream &in) {
  return parse_posteriors(slurp(in));
}

std::string emit_posteriors(const PosteriorMatrix &p) {
  std::string out = "#posteriors " + p.recording + " " +
                    format_double(p.frame_shift);
  for (const auto &s : p.speakers) out += " " + s;
  out += "\n";
  for (std::size_t t = 0; t < p.frames; ++t) {
    for (std::size_t s = 0; s < p.num_speakers(); ++s) {
      if (s > 0) out += "\t";
      out += format_double(p.at(t, s));
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- transcripts

std::string format_utterance_id(const UtteranceKey &key) {
  auto ms = [](Ticks t) {
    std::string s = std::to_string(t / (kTicksPerSecond / 1000));
    if (s.size() < 6) s.insert(0, 6 - s.size(), '0');
    return s;
  };
  return key.recording + "_" + key.speaker + "_" + ms(key.onset) + "_" +
         ms(key.offset);
}

TranscriptSet parse_transcripts(std::string_view text) {
  TranscriptSet out;
  for (const auto &line : split_lines(text)) {
    if (is_blank_line(line.text)) continue;
    auto fields = split_whitespace(line.text);
    const Field &id = fields[0];
    auto parts = split_on(id.text, '_');
    if (parts.size() != 4) {
      throw ParseError(line.number, id.column,
                       "utterance id must have 4 fields");
    }
    for (std::size_t i = 0; i < 2; ++i) {
      if (parts[i].text.empty()) {
        throw ParseError(line.number, id.column + parts[i].column - 1,
                         "empty recording or speaker in utterance id");
      }
    }
    Ticks times[2];
    for (std::size_t i = 0; i < 2; ++i) {
      const auto &f = parts[2 + i];
      std::int64_t ms = 0;
      auto res = std::from_chars(f.text.data(), f.text.data() + f.text.size(), ms);
      if (f.text.empty() || res.ec != std::errc() ||
          res.ptr != f.text.data() + f.text.size() || ms < 0 ||
          ms > (std::int64_t{1} << 40)) {
        throw ParseError(line.number, id.column + f.column - 1,
                         "utterance time must be a non-negative millisecond "
                         "integer");
      }
      times[i] = ms * (kTicksPerSecond / 1000);
    }
    if (times[1] <= times[0]) {
      throw ParseError(line.number, id.column,
                       "utterance offset must exceed onset");
    }
    UtteranceKey key{std::string(parts[0].text), std::string(parts[1].text),
                     times[0], times[1]};
    std::vector<std::string> tokens;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      tokens.emplace_back(fields[i].text);
    }
    if (!out.emplace(std::move(key), std::move(tokens)).second) {
      throw ParseError(line.number, id.column,
                       "duplicate utterance id '" + std::string(id.text) + "'");
    }
  }
  return out;
}

TranscriptSet parse_transcripts(std::istream &in) {
  return parse_transcripts(slurp(in));
}

std::string emit_transcripts(const TranscriptSet &set) {
  std::string out;
  for (const auto &[key, tokens] : set) {
    out += format_utterance_id(key);
    for (const auto &t : tokens) out += " " + t;
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- embeddings

EmbeddingSet parse_embeddings(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "missing #embeddings header");
  auto header = split_whitespace(lines[0].text);
  if (header.empty() || header[0].text != "#embeddings") {
    throw ParseError(1, 1, "missing #embeddings header");
  }
  if (header.size() != 3) {
    throw ParseError(1, 1, "header must be '#embeddings <recording> <dim>'");
  }
  EmbeddingSet e;
  e.recording = std::string(header[1].text);
  {
    const auto &f = header[2];
    std::size_t dim = 0;
    auto res = std::from_chars(f.text.data(), f.text.data() + f.text.size(), dim);
    if (res.ec != std::errc() || res.ptr != f.text.data() + f.text.size() ||
        dim == 0 || dim > kMaxEmbeddingDim) {
      throw ParseError(1, f.column, "embedding dim must be a positive integer");
    }
    e.dim = dim;
  }
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto &line = lines[li];
    if (is_blank_line(line.text)) continue;
    auto fields = split_whitespace(line.text);
    if (fields.size() != e.dim + 2) {
      throw ParseError(line.number, 1,
                       "dimension mismatch: expected " + std::to_string(e.dim) +
                           " components, got " +
                           std::to_string(fields.size() < 2 ? 0 : fields.size() - 2));
    }
    EmbeddingWindow w;
    w.onset = require_ticks(line, fields[0], "window onset");
    w.offset = require_ticks(line, fields[1], "window offset");
    if (w.onset < 0) {
      throw ParseError(line.number, fields[0].column, "negative window onset");
    }
    if (w.offset <= w.onset) {
      throw ParseError(line.number, fields[1].column,
                       "window offset must exceed onset");
    }
    w.vector.reserve(e.dim);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      auto v = parse_double(fields[i].text);
      if (!v) {
        throw ParseError(line.number, fields[i].column,
                         "non-numeric embedding component");
      }
      if (!std::isfinite(*v)) {
        throw ParseError(line.number, fields[i].column,
                         "non-finite embedding component");
      }
      w.vector.push_back(*v);
    }
    e.items.push_back(std::move(w));
  }
  return e;
}

EmbeddingSet parse_embeddings(std::istream &in) {
  return parse_embeddings(slurp(in));
}

std::string emit_embeddings(const EmbeddingSet &e) {
  std::string out =
      "#embeddings " + e.recording + " " + std::to_string(e.dim) + "\n";
  for (const auto &w : e.items) {
    out += format_ticks(w.onset) + " " + format_ticks(w.offset);
    for (double v : w.vector) out += " " + format_double(v);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------- files

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace asdrkit
