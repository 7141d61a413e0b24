// tests/acceptance.cc

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

// Acceptance run: one PASS/FAIL line per criterion, each against its time
// budget. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "asdrkit/assignment.h"
#include "asdrkit/der.h"
#include "asdrkit/dover.h"
#include "asdrkit/nmesc.h"
#include "asdrkit/pipeline.h"
#include "asdrkit/rover.h"
#include "asdrkit/simulate.h"
#include "json.hpp"
#include "malformed-corpus.h"
#include "oracles.h"

namespace fs = std::filesystem;
using namespace asdrkit;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

using Tokens = std::vector<std::string>;

Tokens random_tokens(Xoshiro256 &rng, std::size_t max_len, std::size_t alphabet) {
  Tokens out(rng.index(max_len + 1));
  for (auto &t : out) t = std::string(1, static_cast<char>('a' + rng.index(alphabet)));
  return out;
}

bool close(double a, double b) {
  return a == b || std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

Outcome report_arithmetic() {
  struct Row {
    double baseline, system;
    const char *expected;
  };
  const Row rows[] = {{54.79, 5.21, "49.58"}, {32.92, 21.77, "11.15"}, {72.88, 25.88, "47.00"}};
  Outcome o;
  for (const auto &r : rows) {
    const std::string got = format_percent(absolute_reduction(r.baseline, r.system));
    o.detail += got + " ";
    o.ok = o.ok && got == r.expected;
  }
  return o;
}

Outcome hungarian_vs_brute_force() {
  Xoshiro256 rng(2);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t rows = 1 + rng.index(8), cols = 1 + rng.index(8);
    CostMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        m(r, c) = static_cast<double>(static_cast<int>(rng.index(201)) - 100);
    if (solve_min_cost(m).total_cost != brute_force(m).total_cost) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + "/500 mismatches"};
}

Outcome der_vs_grid() {
  Xoshiro256 rng(3);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto ref = oracle::random_ms_annotation(rng, "r", 4, 120.0, "a");
    auto hyp = oracle::random_ms_annotation(rng, "r", 4, 120.0, "b");
    for (double collar : {0.0, 0.25}) {
      for (bool overlap : {true, false}) {
        auto fast = compute_der(ref, hyp, DerOptions{collar, overlap});
        auto slow = oracle::grid_der(ref, hyp, collar, overlap);
        const double f[] = {double(fast.scored_speech), double(fast.missed),
                            double(fast.false_alarm), double(fast.confusion)};
        const double s[] = {double(slow.scored), double(slow.missed),
                            double(slow.false_alarm), double(slow.confusion)};
        bool ok = true;
        for (int k = 0; k < 4; ++k) {
          const double scale = std::max({std::fabs(f[k]), std::fabs(s[k]), 1.0});
          worst = std::max(worst, std::fabs(f[k] - s[k]) / scale);
          ok = ok && close(f[k], s[k]);
        }
        if (slow.scored > 0) {
          const double slow_der =
              double(slow.missed + slow.false_alarm + slow.confusion) / double(slow.scored);
          ok = ok && fast.der() && close(*fast.der(), slow_der);
        }
        if (!ok) ++bad;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/800 mismatches, max relative difference %.3g", bad, worst);
  return {bad == 0, buf};
}

Annotation relabel(const Annotation &a, const std::map<std::string, std::string> &names) {
  std::vector<Segment> segs;
  for (auto s : a.segments()) {
    s.speaker = names.at(s.speaker);
    segs.push_back(std::move(s));
  }
  return canonicalize(a.recording(), std::move(segs));
}

Outcome der_identity_and_relabeling() {
  Xoshiro256 rng(4);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    auto x = oracle::random_ms_annotation(rng, "r", 4, 120.0, "a");
    auto other = oracle::random_ms_annotation(rng, "r", 4, 120.0, "b");
    auto self = compute_der(x, x, DerOptions{});
    if (self.missed + self.false_alarm + self.confusion != 0) ++bad;

    // Random bijection onto fresh names, applied to each side separately.
    for (const Annotation *side : {&x, &other}) {
      auto spk = side->speakers();
      std::vector<std::string> fresh;
      for (std::size_t k = 0; k < spk.size(); ++k) fresh.push_back("z" + std::to_string(k));
      for (std::size_t k = fresh.size(); k > 1; --k) std::swap(fresh[k - 1], fresh[rng.index(k)]);
      std::map<std::string, std::string> names;
      for (std::size_t k = 0; k < spk.size(); ++k) names[spk[k]] = fresh[k];
      const Annotation moved = relabel(*side, names);
      for (DerOptions opts : {DerOptions{0.0, true}, DerOptions{0.25, false}}) {
        auto base = compute_der(x, other, opts);
        auto perm = side == &x ? compute_der(moved, other, opts)
                               : compute_der(x, moved, opts);
        if (base.scored_speech != perm.scored_speech || base.missed != perm.missed ||
            base.false_alarm != perm.false_alarm || base.confusion != perm.confusion) {
          ++bad;
        }
      }
    }
  }
  return {bad == 0, std::to_string(bad) + " violations"};
}

Outcome edit_distance_and_cpcer() {
  Xoshiro256 rng(5);
  int bad_ed = 0, bad_cp = 0;
  for (int i = 0; i < 300; ++i) {
    auto a = random_tokens(rng, 12, 4), b = random_tokens(rng, 12, 4);
    auto c = edit_distance(a, b);
    auto sdi = oracle::backtrace_counts(a, b);
    if (c.errors() != oracle::exhaustive_edit_distance(a, b) || c.substitutions != sdi.s ||
        c.deletions != sdi.d || c.insertions != sdi.i || c.ref_len != a.size()) {
      ++bad_ed;
    }
  }
  for (int i = 0; i < 200; ++i) {
    TranscriptSet ref, hyp;
    std::vector<Tokens> ref_streams, hyp_streams;
    const std::size_t nr = 1 + rng.index(5), nh = 1 + rng.index(5);
    auto fill = [&](TranscriptSet &set, std::vector<Tokens> &streams, std::size_t n,
                    const char *prefix) {
      for (std::size_t s = 0; s < n; ++s) {
        Tokens t = random_tokens(rng, 8, 3);
        std::string joined;
        for (auto &x : t) joined += x;
        set[{"r", prefix + std::to_string(s), 0, 10}] = {joined};
        streams.push_back(t);
      }
    };
    fill(ref, ref_streams, nr, "R");
    fill(hyp, hyp_streams, nh, "H");
    std::vector<char> used(hyp_streams.size(), 0);
    if (cpcer(ref, hyp).total.errors() !=
        oracle::min_permutation_errors(ref_streams, hyp_streams, 0, used)) {
      ++bad_cp;
    }
  }
  return {bad_ed == 0 && bad_cp == 0, "edit distance " + std::to_string(bad_ed) +
                                          "/300, cpCER " + std::to_string(bad_cp) +
                                          "/200 mismatches"};
}

Outcome dover_gain() {
  int below_mean = 0, at_most_best = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ConversationSpec cs;
    cs.seed = seed;
    cs.n_speakers = 2 + seed % 3;
    cs.duration = 300.0;
    cs.overlap_ratio = 0.1;
    const Annotation truth = gen_conversation(cs);
    std::vector<RankedHypothesis> hyps;
    std::vector<double> ders;
    const std::vector<unsigned> ranks = {1, 2, 3, 4};
    const auto weights = rank_weights(ranks, 0.5);
    for (unsigned h = 0; h < 4; ++h) {
      CorruptionSpec cor;
      cor.seed = 1000 * (seed + 1) + h;
      cor.boundary_jitter_sigma = 0.25;
      cor.label_swap_rate = 0.10;
      cor.miss_rate = 0.05;
      auto ann = corrupt_annotation(truth, cor);
      ders.push_back(compute_der(truth, ann, DerOptions{}).der().value_or(0.0));
      hyps.push_back({std::move(ann), ranks[h], weights[h]});
    }
    const double fused = compute_der(truth, fuse(hyps), DerOptions{}).der().value_or(0.0);
    double mean = 0.0, best = ders[0];
    for (double d : ders) {
      mean += d / 4.0;
      best = std::min(best, d);
    }
    below_mean += fused < mean;
    at_most_best += fused <= best;
  }
  return {below_mean >= 90 && at_most_best >= 60,
          "fused < mean in " + std::to_string(below_mean) + "/100, <= best in " +
              std::to_string(at_most_best) + "/100"};
}

Outcome rover_gain() {
  // Each corpus: 100 utterances of 100 characters.
  const auto vocab = default_vocabulary(500);
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    TranscriptSet ref;
    for (int u = 0; u < 100; ++u) {
      UtteranceKey k{"rec", "spk" + std::to_string(u % 4), Ticks{u} * 100000,
                     Ticks{u} * 100000 + 90000};
      ref[k] = gen_tokens(seed * 1000 + u, 100, vocab);
    }
    std::vector<TranscriptSet> systems;
    double best = 1.0;
    for (std::uint64_t s = 0; s < 3; ++s) {
      CorruptionSpec cor;
      cor.seed = (seed + 1) * 7919 + s * 104729;
      cor.sub_rate = 0.10;
      systems.push_back(corrupt_transcripts(ref, cor, vocab));
      best = std::min(best, cer(ref, systems.back()).rate().value());
    }
    const double fused = cer(ref, fuse_transcripts(systems)).rate().value();
    wins += fused < best;
  }
  return {wins >= 90, "fused < best individual in " + std::to_string(wins) + "/100"};
}

Outcome nmesc_recovery() {
  int count_ok = 0, purity_ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto fx = gen_embeddings(seed, 4, 20, 32, 0.05);
    auto res = cluster_embeddings(fx.set);
    count_ok += res.nme.est_speakers == 4;
    std::map<std::size_t, std::map<std::size_t, std::size_t>> table;
    for (std::size_t i = 0; i < res.labels.size(); ++i) ++table[res.labels[i]][fx.labels[i]];
    std::size_t majority = 0;
    for (const auto &[cluster, counts] : table) {
      std::size_t m = 0;
      for (const auto &[label, n] : counts) m = std::max(m, n);
      majority += m;
    }
    purity_ok += static_cast<double>(majority) / res.labels.size() >= 0.95;
  }
  return {count_ok >= 95 && purity_ok >= 95, "est_speakers == 4 in " + std::to_string(count_ok) +
                                                 "/100, purity >= 0.95 in " +
                                                 std::to_string(purity_ok) + "/100"};
}

// Runs one parser on arbitrary bytes. Rejection must come as ParseError or
// invalid_argument; anything else counts as a crash.
bool survives(int parser, const std::string &bytes) {
  try {
    switch (parser) {
      case 0: parse_rttm(bytes); break;
      case 1: parse_uem(bytes); break;
      case 2: parse_posteriors(bytes); break;
      case 3: parse_transcripts(bytes); break;
      default: parse_embeddings(bytes); break;
    }
  } catch (const ParseError &) {
  } catch (const std::invalid_argument &) {
  } catch (...) {
    return false;
  }
  return true;
}

Outcome formats() {
  Xoshiro256 rng(9);
  int round_trip_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    AnnotationSet set;
    for (int r = 0; r < 2; ++r) {
      const std::string rec = "rec" + std::to_string(r);
      auto ann = oracle::random_ms_annotation(rng, rec, 4, 60.0);
      if (!ann.empty()) set.emplace(rec, ann);
    }
    if (parse_rttm(emit_rttm(set)) != set) ++round_trip_bad;
  }

  std::size_t cases = 0, rejected = 0;
  auto expect_error = [&](const corpus::Malformed &m, auto parse) {
    ++cases;
    try {
      parse(m.text);
    } catch (const ParseError &e) {
      rejected += e.line() == m.line && e.column() >= 1;
    }
  };
  for (const auto &m : corpus::malformed_posteriors())
    expect_error(m, [](const std::string &t) { parse_posteriors(t); });
  for (const auto &m : corpus::malformed_embeddings())
    expect_error(m, [](const std::string &t) { parse_embeddings(t); });

  // Seeds for mutation: one valid file per parser.
  ConversationSpec cs;
  cs.seed = 1;
  cs.duration = 20;
  const Annotation conv = gen_conversation(cs);
  const auto vocab = default_vocabulary(50);
  const std::string valid[] = {
      emit_rttm(conv),
      "rec 1 0.00 5.00\nrec 1 7.50 9.25\n",
      emit_posteriors(gen_posteriors(conv, 0.1, conv.speakers(), 3.0, 0.3, 1)),
      emit_transcripts(gen_transcripts(conv, 1, 2.0, vocab)),
      emit_embeddings(gen_embeddings(1, 2, 3, 4, 0.05).set),
  };
  const char alphabet[] = "0123456789.-+eE \t\n#;_<>NAaSPEKR";
  int crashes = 0;
  for (int i = 0; i < 1000000; ++i) {
    const int parser = i % 5;
    std::string bytes;
    if ((i / 5) % 2 == 0) {
      bytes.resize(rng.index(96));
      for (auto &b : bytes) {
        b = rng.index(4) == 0 ? static_cast<char>(rng.index(256))
                              : alphabet[rng.index(sizeof(alphabet) - 1)];
      }
    } else {
      bytes = valid[parser];
      const std::size_t edits = 1 + rng.index(4);
      for (std::size_t e = 0; e < edits && !bytes.empty(); ++e) {
        const std::size_t at = rng.index(bytes.size());
        switch (rng.index(3)) {
          case 0: bytes[at] = static_cast<char>(rng.index(256)); break;
          case 1: bytes.erase(at, 1 + rng.index(8)); break;
          default: bytes.insert(at, 1, alphabet[rng.index(sizeof(alphabet) - 1)]); break;
        }
      }
    }
    if (!survives(parser, bytes)) ++crashes;
  }
  return {round_trip_bad == 0 && rejected == cases && crashes == 0,
          "round trip " + std::to_string(1000 - round_trip_bad) + "/1000, malformed rejected " +
              std::to_string(rejected) + "/" + std::to_string(cases) + ", fuzz failures " +
              std::to_string(crashes) + "/1000000"};
}

Outcome demo_pipeline() {
  const fs::path source = fs::path(ASDRKIT_SOURCE_DIR) / "demo" / "pipeline.json";
  std::string outputs[2];
  std::string summary;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = fs::temp_directory_path() / ("asdrkit-demo-" + std::to_string(run));
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::copy_file(source, dir / "pipeline.json");
    auto result = run_pipeline((dir / "pipeline.json").string(), {});
    summary = result.summary;
    std::set<std::string> names;
    for (const auto &e : fs::directory_iterator(dir / "out")) {
      names.insert(e.path().filename().string());
    }
    for (const auto &n : names) outputs[run] += n + "\n" + read_file((dir / "out" / n).string());
  }
  if (outputs[0] != outputs[1]) return {false, "outputs differ between runs"};

  const fs::path out = fs::temp_directory_path() / "asdrkit-demo-0" / "out";
  auto der_of = [&](const char *name) {
    auto j = nlohmann::json::parse(read_file((out / name).string()));
    return j["total"]["der"].get<double>();
  };
  const double fused = der_of("der_fused.json");
  bool ok = summary.find("absolute reduction") != std::string::npos;
  for (const char *name : {"der1.json", "der2.json", "der3.json", "der4.json"}) {
    ok = ok && fused <= der_of(name);
  }
  return {ok, "byte-identical reruns; fused DER " + format_percent(100.0 * fused) +
                  "% vs inputs checked"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "report arithmetic", 1, report_arithmetic},
      {2, "hungarian vs brute force", 10, hungarian_vs_brute_force},
      {3, "DER sweep-line vs 1 ms grid", 60, der_vs_grid},
      {4, "DER identity and label bijection", 10, der_identity_and_relabeling},
      {5, "edit distance and cpCER oracles", 30, edit_distance_and_cpcer},
      {6, "DOVER-Lap fusion gain", 120, dover_gain},
      {7, "ROVER fusion gain", 120, rover_gain},
      {8, "NMESC speaker count and purity", 120, nmesc_recovery},
      {9, "format round trip, malformed corpus, fuzz", 300, formats},
      {10, "end-to-end demo", 60, demo_pipeline},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.ok && secs <= c.limit_seconds;
    failed += !pass;
    std::printf("criterion %2d %s: %s (%s; %.2f s of %.0f s)\n", c.id, c.name,
                pass ? "PASS" : "FAIL", o.detail.c_str(), secs, c.limit_seconds);
    std::fflush(stdout);
  }
  return failed;
}
