// asdrkit/pipeline.cc

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

#include "asdrkit/pipeline.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>

#include "asdrkit/dover.h"
#include "asdrkit/nmesc.h"
#include "asdrkit/rover.h"
#include "asdrkit/simulate.h"
#include "asdrkit/tsvad-post.h"
#include "json.hpp"

namespace asdrkit {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

template <typename Fn>
auto with_file(const std::string &path, Fn &&parse) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error &e) {
    throw InputError(e.what());
  }
  try {
    return parse(text);
  } catch (const ParseError &e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ":" +
                     std::to_string(e.column()) + ": " + e.reason());
  } catch (const std::invalid_argument &e) {
    throw InputError(path + ": " + e.what());
  }
}

Json seconds(Ticks t) { return ticks_to_seconds(t); }

Json optional_number(std::optional<double> v) {
  return v ? Json(*v) : Json(nullptr);
}

std::string percent_or_undefined(std::optional<double> ratio) {
  return ratio ? format_percent(100.0 * *ratio) + "%" : std::string("undefined");
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = true) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ')
              : std::string(width - s.size(), ' ') + s;
}

Json der_components(const DerReport &r) {
  Json o;
  o["scored_speech"] = seconds(r.scored_speech);
  o["missed"] = seconds(r.missed);
  o["false_alarm"] = seconds(r.false_alarm);
  o["confusion"] = seconds(r.confusion);
  o["der"] = optional_number(r.der());
  return o;
}

Json edit_json(const EditCounts &c) {
  Json o;
  o["substitutions"] = c.substitutions;
  o["deletions"] = c.deletions;
  o["insertions"] = c.insertions;
  o["ref_len"] = c.ref_len;
  o["errors"] = c.errors();
  o["rate"] = optional_number(c.rate());
  return o;
}

std::string edit_summary(const EditCounts &c) {
  return "S=" + std::to_string(c.substitutions) + " D=" + std::to_string(c.deletions) +
         " I=" + std::to_string(c.insertions) + " N=" + std::to_string(c.ref_len);
}

}  // namespace

AnnotationSet load_rttm(const std::string &path) {
  return with_file(path, [](const std::string &t) { return parse_rttm(t); });
}

std::map<std::string, ScoringRegionSet> load_uem(const std::string &path) {
  return with_file(path, [](const std::string &t) { return parse_uem(t); });
}

PosteriorMatrix load_posteriors(const std::string &path) {
  return with_file(path, [](const std::string &t) { return parse_posteriors(t); });
}

TranscriptSet load_transcripts(const std::string &path) {
  return with_file(path, [](const std::string &t) { return parse_transcripts(t); });
}

EmbeddingSet load_embeddings(const std::string &path) {
  return with_file(path, [](const std::string &t) { return parse_embeddings(t); });
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char *kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

std::string der_text(const CorpusDer &r) {
  std::string out = pad("recording", 20) + pad("scored", 11, false) +
                    pad("missed", 11, false) + pad("false_alarm", 13, false) +
                    pad("confusion", 11, false) + pad("DER", 10, false) + "\n";
  for (const auto &rec : r.recordings) {
    out += pad(rec.recording, 20) + pad(fixed(ticks_to_seconds(rec.scored_speech), 2), 11, false) +
           pad(fixed(ticks_to_seconds(rec.missed), 2), 11, false) +
           pad(fixed(ticks_to_seconds(rec.false_alarm), 2), 13, false) +
           pad(fixed(ticks_to_seconds(rec.confusion), 2), 11, false) +
           pad(percent_or_undefined(rec.der()), 10, false) + "\n";
  }
  const auto &t = r.total;
  out += "scored " + fixed(ticks_to_seconds(t.scored_speech), 2) + " s, missed " +
         fixed(ticks_to_seconds(t.missed), 2) + " s, false alarm " +
         fixed(ticks_to_seconds(t.false_alarm), 2) + " s, confusion " +
         fixed(ticks_to_seconds(t.confusion), 2) + " s\n";
  out += "DER " + percent_or_undefined(t.der()) + "\n";
  return out;
}

std::string der_json(const CorpusDer &r, const DerOptions &opts) {
  Json j;
  j["metric"] = "DER";
  j["collar"] = opts.collar;
  j["score_overlap"] = opts.score_overlap;
  j["total"] = der_components(r.total);
  j["recordings"] = Json::array();
  for (const auto &rec : r.recordings) {
    Json o;
    o["recording"] = rec.recording;
    o.update(der_components(rec));
    Json map = Json::object();
    for (const auto &[ref, hyp] : rec.speaker_map) map[ref] = hyp;
    o["speaker_map"] = std::move(map);
    j["recordings"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string cer_text(const CerReport &r) {
  return edit_summary(r.total) + "\nCER " + percent_or_undefined(r.rate()) + "\n";
}

std::string cer_json(const CerReport &r) {
  Json j;
  j["metric"] = "CER";
  j["total"] = edit_json(r.total);
  j["utterances"] = Json::array();
  for (const auto &[key, c] : r.utterances) {
    Json o;
    o["id"] = format_utterance_id(key);
    o.update(edit_json(c));
    j["utterances"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string cpcer_text(const CpcerReport &r) {
  std::string out;
  for (const auto &rec : r.recordings) {
    out += rec.recording + ":";
    for (const auto &[ref, hyp] : rec.assignment) out += " " + ref + "->" + hyp;
    out += "  " + edit_summary(rec.counts) + "  " + percent_or_undefined(rec.counts.rate()) +
           "\n";
  }
  out += edit_summary(r.total) + "\ncpCER " + percent_or_undefined(r.rate()) + "\n";
  return out;
}

std::string cpcer_json(const CpcerReport &r) {
  Json j;
  j["metric"] = "cpCER";
  j["total"] = edit_json(r.total);
  j["recordings"] = Json::array();
  for (const auto &rec : r.recordings) {
    Json o;
    o["recording"] = rec.recording;
    Json map = Json::object();
    for (const auto &[ref, hyp] : rec.assignment) map[ref] = hyp;
    o["assignment"] = std::move(map);
    o.update(edit_json(rec.counts));
    j["recordings"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

AnnotationSet fuse_annotation_sets(const std::vector<AnnotationSet> &sets,
                                   std::vector<unsigned> ranks, double exponent) {
  if (sets.empty()) throw std::invalid_argument("no hypotheses to fuse");
  if (ranks.empty()) {
    for (unsigned i = 1; i <= sets.size(); ++i) ranks.push_back(i);
  }
  if (ranks.size() != sets.size()) {
    throw std::invalid_argument("one rank per hypothesis required");
  }
  const auto weights = rank_weights(ranks, exponent);
  std::set<std::string> recordings;
  for (const auto &s : sets)
    for (const auto &[rec, _] : s) recordings.insert(rec);
  AnnotationSet out;
  for (const auto &rec : recordings) {
    std::vector<RankedHypothesis> hyps;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      auto it = sets[i].find(rec);
      hyps.push_back({it != sets[i].end() ? it->second : canonicalize(rec, {}),
                      ranks[i], weights[i]});
    }
    auto fused = fuse(hyps);
    if (!fused.empty()) out.emplace(rec, std::move(fused));
  }
  return out;
}

// ------------------------------------------------------------------ runner

namespace {

const std::map<std::string, std::vector<std::string>> &stage_fields() {
  static const std::map<std::string, std::vector<std::string>> kFields = {
      {"simulate",
       {"seed", "speakers", "duration", "mean_turn", "overlap_ratio", "recording"}},
      {"corrupt-rttm",
       {"input", "seed", "jitter", "miss_rate", "false_alarm_rate", "label_swap_rate"}},
      {"simulate-posteriors",
       {"input", "seed", "frame_shift", "noise_sigma", "duration", "speakers"}},
      {"post-process",
       {"input", "median_window", "onset", "offset", "min_speech", "min_silence"}},
      {"fuse-rttm", {"inputs", "ranks", "exponent"}},
      {"score-der", {"ref", "hyp", "collar", "score_overlap", "uem", "label"}},
      {"simulate-embeddings",
       {"seed", "k", "n_per_cluster", "dim", "noise_sigma", "recording"}},
      {"cluster", {"input", "max_speakers", "seed", "p_candidates"}},
      {"simulate-transcripts", {"input", "seed", "chars_per_second", "vocabulary_size"}},
      {"corrupt-transcripts",
       {"input", "seed", "sub_rate", "ins_rate", "del_rate", "vocabulary_size"}},
      {"fuse-text", {"inputs", "alpha", "null_conf", "unit", "strip_punctuation"}},
      {"score-cer", {"ref", "hyp", "unit", "strip_punctuation", "label"}},
      {"score-cpcer", {"ref", "hyp", "unit", "strip_punctuation", "label"}},
  };
  return kFields;
}

std::string default_extension(const std::string &type) {
  if (type == "simulate-posteriors") return ".tsv";
  if (type == "simulate-embeddings") return ".emb";
  if (type.rfind("score-", 0) == 0) return ".json";
  if (type == "simulate-transcripts" || type == "corrupt-transcripts" ||
      type == "fuse-text") {
    return ".txt";
  }
  return ".rttm";
}

// One stage's parameters with error messages that locate the stage.
class StageParams {
 public:
  StageParams(const Json &st, std::string where) : st_(st), where_(std::move(where)) {}

  const std::string &where() const { return where_; }
  [[noreturn]] void fail(const std::string &msg) const {
    throw InputError(where_ + ": " + msg);
  }
  bool has(const char *key) const { return st_.contains(key); }

  double number(const char *key, std::optional<double> def = std::nullopt) const {
    if (!st_.contains(key)) {
      if (def) return *def;
      fail(std::string("missing field '") + key + "'");
    }
    const auto &v = st_.at(key);
    if (!v.is_number()) fail(std::string("field '") + key + "' must be a number");
    return v.get<double>();
  }

  std::uint64_t integer(const char *key, std::optional<std::uint64_t> def = std::nullopt) const {
    if (!st_.contains(key)) {
      if (def) return *def;
      fail(std::string("missing field '") + key + "'");
    }
    const auto &v = st_.at(key);
    if (!v.is_number_unsigned()) {
      fail(std::string("field '") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool flag(const char *key, bool def) const {
    if (!st_.contains(key)) return def;
    const auto &v = st_.at(key);
    if (!v.is_boolean()) fail(std::string("field '") + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string text(const char *key, std::optional<std::string> def = std::nullopt) const {
    if (!st_.contains(key)) {
      if (def) return *def;
      fail(std::string("missing field '") + key + "'");
    }
    const auto &v = st_.at(key);
    if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<std::string> texts(const char *key) const {
    if (!st_.contains(key)) fail(std::string("missing field '") + key + "'");
    const auto &v = st_.at(key);
    if (!v.is_array() || v.empty()) {
      fail(std::string("field '") + key + "' must be a non-empty list of strings");
    }
    std::vector<std::string> out;
    for (const auto &x : v) {
      if (!x.is_string()) fail(std::string("field '") + key + "' must list strings");
      out.push_back(x.get<std::string>());
    }
    return out;
  }

  std::vector<std::uint64_t> integers(const char *key) const {
    std::vector<std::uint64_t> out;
    if (!st_.contains(key)) return out;
    const auto &v = st_.at(key);
    if (!v.is_array()) fail(std::string("field '") + key + "' must be a list");
    for (const auto &x : v) {
      if (!x.is_number_unsigned()) {
        fail(std::string("field '") + key + "' must list non-negative integers");
      }
      out.push_back(x.get<std::uint64_t>());
    }
    return out;
  }

  TokenizeOptions tokens() const {
    TokenizeOptions t;
    const std::string unit = text("unit", "char");
    if (unit == "char") {
      t.unit = TokenUnit::kCharacter;
    } else if (unit == "word") {
      t.unit = TokenUnit::kWord;
    } else {
      fail("field 'unit' must be \"char\" or \"word\"");
    }
    t.strip_punctuation = flag("strip_punctuation", false);
    return t;
  }

 private:
  const Json &st_;
  std::string where_;
};

std::string single_line(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '\n', ' ');
  return out;
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct ScoreLine {
  std::string stage;
  std::string label;
  std::string metric;
  std::optional<double> ratio;
};

const Annotation &only_recording(const AnnotationSet &set, const StageParams &p,
                                 const std::string &file) {
  if (set.size() != 1) {
    p.fail("'" + file + "' must hold exactly one recording, found " +
           std::to_string(set.size()));
  }
  return set.begin()->second;
}

std::size_t vocabulary_size(const StageParams &p) {
  const auto v = p.integer("vocabulary_size", 500);
  if (v < 2 || v > 20000) p.fail("vocabulary_size must be in [2, 20000]");
  return static_cast<std::size_t>(v);
}

// Runs one stage and returns the contents of its output file.
std::string execute(const std::string &type, const StageParams &p,
                    const std::function<std::string(const char *)> &input,
                    const std::function<std::vector<std::string>(const char *)> &inputs,
                    std::size_t threads) {
  if (type == "simulate") {
    ConversationSpec spec;
    spec.seed = p.integer("seed");
    spec.n_speakers = static_cast<std::size_t>(p.integer("speakers", 2));
    spec.duration = p.number("duration", 300.0);
    spec.mean_turn = p.number("mean_turn", 4.0);
    spec.overlap_ratio = p.number("overlap_ratio", 0.0);
    spec.recording = p.text("recording", "sim");
    return emit_rttm(gen_conversation(spec));
  }
  if (type == "corrupt-rttm") {
    CorruptionSpec spec;
    spec.seed = p.integer("seed");
    spec.boundary_jitter_sigma = p.number("jitter", 0.0);
    spec.miss_rate = p.number("miss_rate", 0.0);
    spec.false_alarm_rate = p.number("false_alarm_rate", 0.0);
    spec.label_swap_rate = p.number("label_swap_rate", 0.0);
    AnnotationSet out;
    for (const auto &[rec, ann] : load_rttm(input("input"))) {
      auto c = corrupt_annotation(ann, spec);
      ++spec.seed;
      if (!c.empty()) out.emplace(rec, std::move(c));
    }
    return emit_rttm(out);
  }
  if (type == "simulate-posteriors") {
    const std::string file = input("input");
    const auto set = load_rttm(file);
    const Annotation &ann = only_recording(set, p, file);
    std::vector<std::string> speakers;
    if (p.has("speakers")) {
      speakers = p.texts("speakers");
    } else {
      speakers = ann.speakers();
    }
    Ticks end = 0;
    for (const auto &s : ann.segments()) end = std::max(end, s.offset());
    const double duration = p.number("duration", ticks_to_seconds(end));
    return emit_posteriors(gen_posteriors(ann, p.number("frame_shift", 0.01), speakers,
                                          duration, p.number("noise_sigma", 0.0),
                                          p.integer("seed", 0)));
  }
  if (type == "post-process") {
    PostProcessConfig cfg;
    cfg.median_window = static_cast<std::size_t>(p.integer("median_window", 11));
    cfg.onset_threshold = p.number("onset", 0.5);
    cfg.offset_threshold = p.number("offset", 0.5);
    cfg.min_speech = p.number("min_speech", 0.2);
    cfg.min_silence = p.number("min_silence", 0.3);
    auto ann = post_process(load_posteriors(input("input")), cfg);
    return ann.empty() ? std::string() : emit_rttm(ann);
  }
  if (type == "fuse-rttm") {
    std::vector<AnnotationSet> sets;
    for (const auto &f : inputs("inputs")) sets.push_back(load_rttm(f));
    std::vector<unsigned> ranks;
    for (auto r : p.integers("ranks")) ranks.push_back(static_cast<unsigned>(r));
    return emit_rttm(fuse_annotation_sets(sets, ranks, p.number("exponent", 0.5)));
  }
  if (type == "score-der") {
    DerOptions opts;
    opts.collar = p.number("collar", 0.25);
    opts.score_overlap = p.flag("score_overlap", true);
    std::optional<std::map<std::string, ScoringRegionSet>> uem;
    if (p.has("uem")) uem = load_uem(input("uem"));
    auto report = score_corpus(load_rttm(input("ref")), load_rttm(input("hyp")), opts,
                               uem ? &*uem : nullptr, threads);
    return der_json(report, opts);
  }
  if (type == "simulate-embeddings") {
    auto fx = gen_embeddings(p.integer("seed"), static_cast<std::size_t>(p.integer("k", 4)),
                             static_cast<std::size_t>(p.integer("n_per_cluster", 20)),
                             static_cast<std::size_t>(p.integer("dim", 32)),
                             p.number("noise_sigma", 0.05), p.text("recording", "sim"));
    return emit_embeddings(fx.set);
  }
  if (type == "cluster") {
    ClusterOptions opts;
    opts.max_speakers = static_cast<std::size_t>(p.integer("max_speakers", 4));
    opts.seed = p.integer("seed", 0);
    for (auto c : p.integers("p_candidates")) opts.p_candidates.push_back(c);
    auto res = cluster_embeddings(load_embeddings(input("input")), opts);
    return emit_rttm(res.annotation);
  }
  if (type == "simulate-transcripts") {
    const std::string file = input("input");
    const auto set = load_rttm(file);
    auto vocab = default_vocabulary(vocabulary_size(p));
    TranscriptSet out;
    std::uint64_t seed = p.integer("seed");
    for (const auto &[rec, ann] : set) {
      auto t = gen_transcripts(ann, seed, p.number("chars_per_second", 4.0), vocab);
      seed += ann.size();
      out.merge(t);
    }
    return emit_transcripts(out);
  }
  if (type == "corrupt-transcripts") {
    CorruptionSpec spec;
    spec.seed = p.integer("seed");
    spec.sub_rate = p.number("sub_rate", 0.0);
    spec.ins_rate = p.number("ins_rate", 0.0);
    spec.del_rate = p.number("del_rate", 0.0);
    auto vocab = default_vocabulary(vocabulary_size(p));
    return emit_transcripts(corrupt_transcripts(load_transcripts(input("input")), spec, vocab));
  }
  if (type == "fuse-text") {
    std::vector<TranscriptSet> systems;
    for (const auto &f : inputs("inputs")) systems.push_back(load_transcripts(f));
    RoverOptions opts;
    opts.alpha = p.number("alpha", 1.0);
    opts.null_conf = p.number("null_conf", 0.7);
    opts.tokens = p.tokens();
    return emit_transcripts(fuse_transcripts(systems, opts));
  }
  if (type == "score-cer") {
    return cer_json(cer(load_transcripts(input("ref")), load_transcripts(input("hyp")),
                        p.tokens()));
  }
  if (type == "score-cpcer") {
    return cpcer_json(cpcer(load_transcripts(input("ref")), load_transcripts(input("hyp")),
                            p.tokens(), threads));
  }
  p.fail("unknown stage type '" + type + "'");
}

}  // namespace

RunResult run_pipeline(const std::string &config_path, const RunOptions &opts) {
  std::string text;
  try {
    text = read_file(config_path);
  } catch (const std::runtime_error &e) {
    throw InputError(e.what());
  }
  Json cfg;
  try {
    cfg = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    auto [line, col] = position_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw InputError(config_path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": invalid JSON: " + single_line(e.what()));
  }
  if (!cfg.is_object()) throw InputError(config_path + ": config must be a JSON object");
  for (const auto &[key, _] : cfg.items()) {
    if (key != "output_dir" && key != "stages" && key != "comparisons" &&
        key != "title") {
      throw InputError(config_path + ": unknown top-level field '" + key + "'");
    }
  }
  if (!cfg.contains("stages") || !cfg["stages"].is_array() || cfg["stages"].empty()) {
    throw InputError(config_path + ": 'stages' must be a non-empty list");
  }

  const fs::path base = fs::path(config_path).parent_path();
  const std::string out_name =
      cfg.contains("output_dir") && cfg["output_dir"].is_string()
          ? cfg["output_dir"].get<std::string>()
          : std::string("out");
  const fs::path out_dir = base / out_name;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw InputError(out_dir.string() + ": cannot create output directory");

  const fs::path state_path = out_dir / ".asdrkit-state.json";
  Json state = Json::object();
  if (opts.resume && fs::exists(state_path)) {
    try {
      state = Json::parse(read_file(state_path.string()));
      if (!state.is_object()) state = Json::object();
    } catch (const std::exception &) {
      state = Json::object();
    }
  }
  Json new_state = Json::object();

  RunResult result;
  std::map<std::string, fs::path> produced;
  std::map<std::string, std::string> stage_types;
  std::vector<ScoreLine> scores;

  const auto &stages = cfg["stages"];
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const Json &st = stages[i];
    std::string where = config_path + ": stage " + std::to_string(i + 1);
    if (!st.is_object()) throw InputError(where + ": must be an object");
    if (!st.contains("name") || !st["name"].is_string() || st["name"].get<std::string>().empty()) {
      throw InputError(where + ": missing field 'name'");
    }
    const std::string name = st["name"].get<std::string>();
    where += " ('" + name + "')";
    if (produced.contains(name)) throw InputError(where + ": duplicate stage name");
    if (!st.contains("type") || !st["type"].is_string()) {
      throw InputError(where + ": missing field 'type'");
    }
    const std::string type = st["type"].get<std::string>();
    auto fields = stage_fields().find(type);
    if (fields == stage_fields().end()) {
      throw InputError(where + ": unknown stage type '" + type + "'");
    }
    for (const auto &[key, _] : st.items()) {
      if (key == "name" || key == "type" || key == "output") continue;
      if (std::find(fields->second.begin(), fields->second.end(), key) ==
          fields->second.end()) {
        throw InputError(where + ": unknown field '" + key + "' for type '" + type + "'");
      }
    }
    StageParams params(st, where);
    const std::string output_name = params.text("output", name + default_extension(type));
    const fs::path output = out_dir / output_name;

    // Resolve inputs up front so the digest covers their contents.
    std::map<std::string, std::vector<std::string>> resolved;
    auto resolve = [&](const std::string &ref) {
      if (auto it = produced.find(ref); it != produced.end()) return it->second.string();
      const fs::path file = base / ref;
      if (!fs::is_regular_file(file)) {
        params.fail("input '" + ref + "' is neither an earlier stage nor an existing file");
      }
      return file.string();
    };
    for (const char *key : {"input", "ref", "hyp", "uem"}) {
      if (st.contains(key)) resolved[key] = {resolve(params.text(key))};
    }
    if (st.contains("inputs")) {
      for (const auto &ref : params.texts("inputs")) resolved["inputs"].push_back(resolve(ref));
    }
    std::string digest_input = type + "\n" + st.dump() + "\n";
    for (const auto &[key, files] : resolved) {
      for (const auto &f : files) {
        std::string content;
        try {
          content = read_file(f);
        } catch (const std::runtime_error &e) {
          throw InputError(e.what());
        }
        digest_input += key + " " + sha256_hex(content) + "\n";
      }
    }
    const std::string digest = sha256_hex(digest_input);

    bool reuse = false;
    if (opts.resume && state.contains(name) && fs::is_regular_file(output)) {
      const Json &prev = state[name];
      if (prev.value("digest", "") == digest) {
        try {
          reuse = prev.value("output_digest", "") == sha256_hex(read_file(output.string()));
        } catch (const std::runtime_error &) {
          reuse = false;
        }
      }
    }

    std::string contents;
    if (reuse) {
      contents = read_file(output.string());
      result.reused.push_back(name);
    } else {
      auto one = [&](const char *key) -> std::string {
        auto it = resolved.find(key);
        if (it == resolved.end()) params.fail(std::string("missing field '") + key + "'");
        return it->second.front();
      };
      auto many = [&](const char *key) -> std::vector<std::string> {
        auto it = resolved.find(key);
        if (it == resolved.end()) params.fail(std::string("missing field '") + key + "'");
        return it->second;
      };
      try {
        contents = execute(type, params, one, many, opts.threads);
      } catch (const InputError &) {
        throw;
      } catch (const std::exception &e) {
        throw InputError(where + ": " + e.what());
      }
      fs::create_directories(output.parent_path(), ec);
      try {
        write_file(output.string(), contents);
      } catch (const std::runtime_error &e) {
        throw InputError(e.what());
      }
      result.executed.push_back(name);
    }
    new_state[name] = {{"digest", digest}, {"output_digest", sha256_hex(contents)}};
    produced[name] = output;
    stage_types[name] = type;

    if (type.rfind("score-", 0) == 0) {
      const Json report = Json::parse(contents);
      const Json &value = report["total"][type == "score-der" ? "der" : "rate"];
      ScoreLine line{name, params.text("label", name), report["metric"].get<std::string>(),
                     std::nullopt};
      if (value.is_number()) line.ratio = value.get<double>();
      if (!line.ratio) result.undefined_metric = true;
      scores.push_back(std::move(line));
    }
  }
  try {
    write_file(state_path.string(), new_state.dump(2) + "\n");
  } catch (const std::runtime_error &e) {
    throw InputError(e.what());
  }

  // Summary in the layout of a results table: one row per score stage, then
  // baseline-versus-system comparisons.
  std::string summary;
  summary += cfg.value("title", std::string("ASDR pipeline summary")) + "\n";
  summary += pad("System", 24) + pad("Metric", 8) + pad("Score", 10, false) + "\n";
  for (const auto &s : scores) {
    summary += pad(s.label, 24) + pad(s.metric, 8) +
               pad(s.ratio ? format_percent(100.0 * *s.ratio) + "%" : "undefined", 10, false) +
               "\n";
  }
  if (cfg.contains("comparisons")) {
    const auto &cmp = cfg["comparisons"];
    if (!cmp.is_array()) throw InputError(config_path + ": 'comparisons' must be a list");
    if (!cmp.empty()) summary += "\n";
    for (std::size_t i = 0; i < cmp.size(); ++i) {
      const std::string where = config_path + ": comparison " + std::to_string(i + 1);
      if (!cmp[i].is_object() || !cmp[i].contains("baseline") || !cmp[i].contains("system") ||
          !cmp[i]["baseline"].is_string() || !cmp[i]["system"].is_string()) {
        throw InputError(where + ": needs string fields 'baseline' and 'system'");
      }
      auto find = [&](const std::string &n) -> const ScoreLine & {
        for (const auto &s : scores)
          if (s.stage == n) return s;
        throw InputError(where + ": '" + n + "' is not a score stage");
      };
      const ScoreLine &b = find(cmp[i]["baseline"].get<std::string>());
      const ScoreLine &s = find(cmp[i]["system"].get<std::string>());
      if (b.metric != s.metric) {
        throw InputError(where + ": cannot compare " + b.metric + " with " + s.metric);
      }
      summary += b.metric + " " + b.label + " -> " + s.label + ": ";
      if (b.ratio && s.ratio) {
        const double bp = 100.0 * *b.ratio, sp = 100.0 * *s.ratio;
        summary += "from " + format_percent(bp) + "% to " + format_percent(sp) +
                   "%, absolute reduction " + format_percent(absolute_reduction(bp, sp)) + "\n";
      } else {
        summary += "undefined\n";
      }
    }
  }
  try {
    write_file((out_dir / "summary.txt").string(), summary);
  } catch (const std::runtime_error &e) {
    throw InputError(e.what());
  }
  result.summary = std::move(summary);
  return result;
}

}  // namespace asdrkit
