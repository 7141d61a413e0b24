// tools/asdrkit.cc

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

// asdrkit: scoring, post-processing, clustering, fusion and simulation from
// the command line. Exit status 0 on success, 1 when a metric is undefined
// (empty reference), 2 on bad input.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asdrkit/dover.h"
#include "asdrkit/nmesc.h"
#include "asdrkit/parallel.h"
#include "asdrkit/pipeline.h"
#include "asdrkit/rover.h"
#include "asdrkit/simulate.h"
#include "asdrkit/tsvad-post.h"
#include "json.hpp"

namespace {

using namespace asdrkit;

constexpr int kUndefined = 1;
constexpr int kBadInput = 2;

void output(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  try {
    write_file(path, text);
  } catch (const std::runtime_error &e) {
    throw InputError(e.what());
  }
}

TokenizeOptions token_options(const std::string &unit, bool strip) {
  TokenizeOptions t;
  t.unit = unit == "word" ? TokenUnit::kWord : TokenUnit::kCharacter;
  t.strip_punctuation = strip;
  return t;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"asdrkit: diarization and ASR scoring, fusion and simulation"};
  app.require_subcommand(1);
  std::function<int()> action;

  // score-der
  std::string ref, hyp, uem, report, out;
  double collar = 0.25;
  bool no_overlap = false;
  auto *der_cmd = app.add_subcommand("score-der", "Diarization error rate");
  der_cmd->add_option("--ref", ref, "Reference RTTM")->required();
  der_cmd->add_option("--hyp", hyp, "Hypothesis RTTM")->required();
  der_cmd->add_option("--collar", collar, "Collar width in seconds")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  der_cmd->add_option("--uem", uem, "Scoring regions");
  der_cmd->add_flag("--no-overlap", no_overlap, "Skip regions with overlapping reference speech");
  der_cmd->add_option("--report", report, "Write the JSON report here");
  der_cmd->callback([&] {
    action = [&] {
      DerOptions opts{collar, !no_overlap};
      std::optional<std::map<std::string, ScoringRegionSet>> regions;
      if (!uem.empty()) regions = load_uem(uem);
      auto r = score_corpus(load_rttm(ref), load_rttm(hyp), opts,
                            regions ? &*regions : nullptr, default_threads());
      output("", der_text(r));
      if (!report.empty()) output(report, der_json(r, opts));
      return r.total.der() ? 0 : kUndefined;
    };
  });

  // score-cer / score-cpcer
  std::string unit = "char";
  bool strip = false;
  for (const char *name : {"score-cer", "score-cpcer"}) {
    const bool cp = std::string(name) == "score-cpcer";
    auto *cmd = app.add_subcommand(name, cp ? "Concatenated minimum-permutation CER"
                                            : "Character error rate");
    cmd->add_option("--ref", ref, "Reference transcripts")->required();
    cmd->add_option("--hyp", hyp, "Hypothesis transcripts")->required();
    cmd->add_option("--unit", unit, "Scoring unit")
        ->capture_default_str()->check(CLI::IsMember({"char", "word"}));
    cmd->add_flag("--strip-punctuation", strip, "Drop punctuation before scoring");
    cmd->add_option("--report", report, "Write the JSON report here");
    cmd->callback([&, cp] {
      action = [&, cp] {
        auto r_set = load_transcripts(ref);
        auto h_set = load_transcripts(hyp);
        const auto t = token_options(unit, strip);
        if (cp) {
          auto r = cpcer(r_set, h_set, t, default_threads());
          output("", cpcer_text(r));
          if (!report.empty()) output(report, cpcer_json(r));
          return r.rate() ? 0 : kUndefined;
        }
        auto r = cer(r_set, h_set, t);
        output("", cer_text(r));
        if (!report.empty()) output(report, cer_json(r));
        return r.rate() ? 0 : kUndefined;
      };
    });
  }

  // post-process
  std::string posteriors;
  PostProcessConfig pp;
  auto *pp_cmd = app.add_subcommand("post-process", "Frame posteriors to RTTM");
  pp_cmd->add_option("--posteriors", posteriors, "Posterior TSV")->required();
  pp_cmd->add_option("--median-window", pp.median_window, "Median filter frames (odd)")
      ->capture_default_str();
  pp_cmd->add_option("--onset", pp.onset_threshold, "Onset threshold")->capture_default_str();
  pp_cmd->add_option("--offset", pp.offset_threshold, "Offset threshold")->capture_default_str();
  pp_cmd->add_option("--min-speech", pp.min_speech, "Shortest kept segment (s)")
      ->capture_default_str();
  pp_cmd->add_option("--min-silence", pp.min_silence, "Shortest kept gap (s)")
      ->capture_default_str();
  pp_cmd->add_option("--out", out, "Output RTTM (default stdout)");
  pp_cmd->callback([&] {
    action = [&] {
      auto ann = post_process(load_posteriors(posteriors), pp);
      output(out, ann.empty() ? std::string() : emit_rttm(ann));
      return 0;
    };
  });

  // cluster
  std::string embeddings, nme_out;
  ClusterOptions co;
  auto *cl_cmd = app.add_subcommand("cluster", "NME spectral clustering of embeddings");
  cl_cmd->add_option("--embeddings", embeddings, "Embedding TSV")->required();
  cl_cmd->add_option("--max-speakers", co.max_speakers, "Upper bound on speakers")
      ->capture_default_str()->check(CLI::Range(1, 8));
  cl_cmd->add_option("--seed", co.seed, "k-means seed")->capture_default_str();
  cl_cmd->add_option("--out", out, "Output RTTM (default stdout)");
  cl_cmd->add_option("--nme-out", nme_out, "Write the p search as JSON");
  cl_cmd->callback([&] {
    action = [&] {
      auto res = cluster_embeddings(load_embeddings(embeddings), co);
      output(out, emit_rttm(res.annotation));
      if (!nme_out.empty()) {
        nlohmann::ordered_json j;
        j["best_p"] = res.nme.best_p;
        j["est_speakers"] = res.nme.est_speakers;
        j["candidates"] = nlohmann::ordered_json::array();
        for (const auto &c : res.nme.nme_values) {
          j["candidates"].push_back({{"p", c.p},
                                     {"gap", c.gap},
                                     {"ratio", std::isinf(c.ratio) ? nlohmann::ordered_json(nullptr)
                                                                   : nlohmann::ordered_json(c.ratio)},
                                     {"speakers", c.speakers}});
        }
        output(nme_out, j.dump(2) + "\n");
      }
      return 0;
    };
  });

  // fuse-rttm
  std::vector<std::string> files;
  std::vector<unsigned> ranks;
  double exponent = 0.5;
  auto *fr_cmd = app.add_subcommand("fuse-rttm", "DOVER-Lap fusion of RTTM hypotheses");
  fr_cmd->add_option("files", files, "Hypothesis RTTMs")->required()->expected(1, -1);
  fr_cmd->add_option("--ranks", ranks, "Rank per hypothesis, 1 = best")->delimiter(',');
  fr_cmd->add_option("--exponent", exponent, "Weight = rank^-exponent")->capture_default_str();
  fr_cmd->add_option("--out", out, "Output RTTM (default stdout)");
  fr_cmd->callback([&] {
    action = [&] {
      std::vector<AnnotationSet> sets;
      for (const auto &f : files) sets.push_back(load_rttm(f));
      output(out, emit_rttm(fuse_annotation_sets(sets, ranks, exponent)));
      return 0;
    };
  });

  // fuse-text
  RoverOptions ro;
  auto *ft_cmd = app.add_subcommand(
      "fuse-text", "ROVER fusion of transcripts; list the best system first");
  ft_cmd->add_option("files", files, "Transcript files")->required()->expected(1, -1);
  ft_cmd->add_option("--alpha", ro.alpha, "Frequency weight")->capture_default_str();
  ft_cmd->add_option("--null-conf", ro.null_conf, "Confidence of NULL arcs")
      ->capture_default_str();
  ft_cmd->add_option("--unit", unit, "Alignment unit")
      ->capture_default_str()->check(CLI::IsMember({"char", "word"}));
  ft_cmd->add_option("--out", out, "Output transcripts (default stdout)");
  ft_cmd->callback([&] {
    action = [&] {
      std::vector<TranscriptSet> systems;
      for (const auto &f : files) systems.push_back(load_transcripts(f));
      ro.tokens = token_options(unit, false);
      output(out, emit_transcripts(fuse_transcripts(systems, ro)));
      return 0;
    };
  });

  // simulate gen | corrupt | embeddings
  auto *sim = app.add_subcommand("simulate", "Synthetic fixtures");
  sim->require_subcommand(1);
  ConversationSpec cs;
  std::string post_out, text_out;
  double frame_shift = 0.01, noise = 0.0, cps = 4.0;
  std::size_t vocab = 500;
  auto *gen = sim->add_subcommand("gen", "Generate a conversation");
  gen->add_option("--seed", cs.seed)->required();
  gen->add_option("--speakers", cs.n_speakers)->capture_default_str();
  gen->add_option("--duration", cs.duration)->capture_default_str();
  gen->add_option("--mean-turn", cs.mean_turn)->capture_default_str();
  gen->add_option("--overlap-ratio", cs.overlap_ratio)->capture_default_str();
  gen->add_option("--recording", cs.recording)->capture_default_str();
  gen->add_option("--out", out, "Output RTTM (default stdout)");
  gen->add_option("--posteriors-out", post_out, "Also write frame posteriors");
  gen->add_option("--frame-shift", frame_shift)->capture_default_str();
  gen->add_option("--noise-sigma", noise, "Posterior noise")->capture_default_str();
  gen->add_option("--transcripts-out", text_out, "Also write transcripts");
  gen->add_option("--chars-per-second", cps)->capture_default_str();
  gen->add_option("--vocabulary-size", vocab)->capture_default_str();
  gen->callback([&] {
    action = [&] {
      auto ann = gen_conversation(cs);
      output(out, emit_rttm(ann));
      if (!post_out.empty()) {
        const auto speakers = ann.speakers();
        output(post_out, emit_posteriors(gen_posteriors(ann, frame_shift, speakers, cs.duration,
                                                        noise, cs.seed)));
      }
      if (!text_out.empty()) {
        const auto v = default_vocabulary(vocab);
        output(text_out, emit_transcripts(gen_transcripts(ann, cs.seed, cps, v)));
      }
      return 0;
    };
  });

  CorruptionSpec cr;
  std::string rttm_in, text_in;
  auto *cor = sim->add_subcommand("corrupt", "Corrupt an RTTM or a transcript file");
  auto *in_group = cor->add_option_group("input");
  in_group->add_option("--rttm", rttm_in, "RTTM to corrupt");
  in_group->add_option("--transcripts", text_in, "Transcripts to corrupt");
  in_group->require_option(1);
  cor->add_option("--seed", cr.seed)->required();
  cor->add_option("--jitter", cr.boundary_jitter_sigma, "Boundary sigma (s)")
      ->capture_default_str();
  cor->add_option("--miss-rate", cr.miss_rate)->capture_default_str();
  cor->add_option("--false-alarm-rate", cr.false_alarm_rate)->capture_default_str();
  cor->add_option("--label-swap-rate", cr.label_swap_rate)->capture_default_str();
  cor->add_option("--sub-rate", cr.sub_rate)->capture_default_str();
  cor->add_option("--ins-rate", cr.ins_rate)->capture_default_str();
  cor->add_option("--del-rate", cr.del_rate)->capture_default_str();
  cor->add_option("--vocabulary-size", vocab)->capture_default_str();
  cor->add_option("--out", out, "Output file (default stdout)");
  cor->callback([&] {
    action = [&] {
      if (!rttm_in.empty()) {
        AnnotationSet result;
        CorruptionSpec spec = cr;
        for (const auto &[rec, ann] : load_rttm(rttm_in)) {
          auto c = corrupt_annotation(ann, spec);
          ++spec.seed;
          if (!c.empty()) result.emplace(rec, std::move(c));
        }
        output(out, emit_rttm(result));
      } else {
        const auto v = default_vocabulary(vocab);
        output(out, emit_transcripts(corrupt_transcripts(load_transcripts(text_in), cr, v)));
      }
      return 0;
    };
  });

  std::uint64_t seed = 0;
  std::size_t k = 4, n_per = 20, dim = 32;
  std::string labels_out, recording = "sim";
  double emb_noise = 0.05;
  auto *emb = sim->add_subcommand("embeddings", "Clustered speaker embeddings");
  emb->add_option("--seed", seed)->required();
  emb->add_option("--clusters", k)->capture_default_str();
  emb->add_option("--per-cluster", n_per)->capture_default_str();
  emb->add_option("--dim", dim)->capture_default_str();
  emb->add_option("--noise-sigma", emb_noise)->capture_default_str();
  emb->add_option("--recording", recording)->capture_default_str();
  emb->add_option("--out", out, "Output embeddings (default stdout)");
  emb->add_option("--labels-out", labels_out, "Also write the true labels");
  emb->callback([&] {
    action = [&] {
      auto fx = gen_embeddings(seed, k, n_per, dim, emb_noise, recording);
      output(out, emit_embeddings(fx.set));
      if (!labels_out.empty()) output(labels_out, emit_labels(fx.set, fx.labels));
      return 0;
    };
  });

  // run
  std::string config;
  bool resume = false;
  auto *run = app.add_subcommand("run", "Run a JSON pipeline config");
  run->add_option("--config", config, "Pipeline config")->required();
  run->add_flag("--resume", resume, "Reuse up-to-date stage outputs");
  run->callback([&] {
    action = [&] {
      RunOptions ro_run{resume, default_threads()};
      auto r = run_pipeline(config, ro_run);
      output("", r.summary);
      return r.undefined_metric ? kUndefined : 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    return action();
  } catch (const std::exception &e) {
    std::cerr << "asdrkit: " << e.what() << "\n";
    return kBadInput;
  }
}
