// python/asdrkit-core.cc

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

// Python bindings. Files cross the boundary as text in the on-disk formats;
// reports come back as JSON strings that the package decodes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asdrkit/assignment.h"
#include "asdrkit/nmesc.h"
#include "asdrkit/pipeline.h"
#include "asdrkit/rover.h"
#include "asdrkit/simulate.h"
#include "asdrkit/tsvad-post.h"

namespace py = pybind11;
using namespace asdrkit;

namespace {

CostMatrix to_matrix(const std::vector<std::vector<double>> &rows) {
  return CostMatrix::from_rows(rows);
}

py::tuple assignment_tuple(const Assignment &a) {
  return py::make_tuple(a.pairs, a.total_cost);
}

TokenizeOptions token_options(const std::string &unit, bool strip) {
  TokenizeOptions t;
  if (unit == "word") {
    t.unit = TokenUnit::kWord;
  } else if (unit != "char") {
    throw std::invalid_argument("unit must be 'char' or 'word'");
  }
  t.strip_punctuation = strip;
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "asdrkit core bindings";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const InputError &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("absolute_reduction", &absolute_reduction, py::arg("baseline"), py::arg("system"));
  m.def("format_percent", &format_percent, py::arg("pct"));

  m.def("solve_min_cost",
        [](const std::vector<std::vector<double>> &c) {
          return assignment_tuple(solve_min_cost(to_matrix(c)));
        },
        py::arg("cost"));
  m.def("brute_force",
        [](const std::vector<std::vector<double>> &c) {
          return assignment_tuple(brute_force(to_matrix(c)));
        },
        py::arg("cost"));

  m.def("edit_distance",
        [](const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
          auto c = edit_distance(ref, hyp);
          return py::make_tuple(c.substitutions, c.deletions, c.insertions, c.ref_len);
        },
        py::arg("ref"), py::arg("hyp"));
  m.def("split_graphemes", &split_graphemes, py::arg("text"));

  m.def("der_json",
        [](const std::string &ref, const std::string &hyp, double collar, bool score_overlap,
           const std::optional<std::string> &uem) {
          DerOptions opts{collar, score_overlap};
          std::optional<std::map<std::string, ScoringRegionSet>> regions;
          if (uem) regions = parse_uem(*uem);
          return der_json(score_corpus(parse_rttm(ref), parse_rttm(hyp), opts,
                                       regions ? &*regions : nullptr),
                          opts);
        },
        py::arg("ref"), py::arg("hyp"), py::arg("collar") = 0.25,
        py::arg("score_overlap") = true, py::arg("uem") = std::nullopt);
  m.def("cer_json",
        [](const std::string &ref, const std::string &hyp, const std::string &unit,
           bool strip) {
          return cer_json(cer(parse_transcripts(ref), parse_transcripts(hyp),
                              token_options(unit, strip)));
        },
        py::arg("ref"), py::arg("hyp"), py::arg("unit") = "char",
        py::arg("strip_punctuation") = false);
  m.def("cpcer_json",
        [](const std::string &ref, const std::string &hyp, const std::string &unit,
           bool strip) {
          return cpcer_json(cpcer(parse_transcripts(ref), parse_transcripts(hyp),
                                  token_options(unit, strip)));
        },
        py::arg("ref"), py::arg("hyp"), py::arg("unit") = "char",
        py::arg("strip_punctuation") = false);

  m.def("post_process",
        [](const std::string &posteriors, std::size_t median_window, double onset,
           double offset, double min_speech, double min_silence) {
          PostProcessConfig cfg{median_window, onset, offset, min_speech, min_silence};
          auto ann = post_process(parse_posteriors(posteriors), cfg);
          return ann.empty() ? std::string() : emit_rttm(ann);
        },
        py::arg("posteriors"), py::arg("median_window") = 11, py::arg("onset") = 0.5,
        py::arg("offset") = 0.5, py::arg("min_speech") = 0.2, py::arg("min_silence") = 0.3);

  m.def("cluster",
        [](const std::string &embeddings, std::size_t max_speakers, std::uint64_t seed) {
          ClusterOptions opts;
          opts.max_speakers = max_speakers;
          opts.seed = seed;
          auto res = cluster_embeddings(parse_embeddings(embeddings), opts);
          py::dict d;
          d["labels"] = res.labels;
          d["est_speakers"] = res.nme.est_speakers;
          d["best_p"] = res.nme.best_p;
          d["rttm"] = emit_rttm(res.annotation);
          return d;
        },
        py::arg("embeddings"), py::arg("max_speakers") = 4, py::arg("seed") = 0);

  m.def("fuse_rttm",
        [](const std::vector<std::string> &hyps, std::vector<unsigned> ranks,
           double exponent) {
          std::vector<AnnotationSet> sets;
          for (const auto &h : hyps) sets.push_back(parse_rttm(h));
          return emit_rttm(fuse_annotation_sets(sets, std::move(ranks), exponent));
        },
        py::arg("hyps"), py::arg("ranks") = std::vector<unsigned>{},
        py::arg("exponent") = 0.5);

  m.def("rover",
        [](const std::vector<std::vector<std::string>> &hyps, double alpha, double null_conf) {
          return vote(build_wtn(hyps), alpha, null_conf);
        },
        py::arg("hyps"), py::arg("alpha") = 1.0, py::arg("null_conf") = 0.7);
  m.def("fuse_text",
        [](const std::vector<std::string> &systems, double alpha, double null_conf,
           const std::string &unit) {
          std::vector<TranscriptSet> sets;
          for (const auto &s : systems) sets.push_back(parse_transcripts(s));
          RoverOptions opts{alpha, null_conf, token_options(unit, false)};
          return emit_transcripts(fuse_transcripts(sets, opts));
        },
        py::arg("systems"), py::arg("alpha") = 1.0, py::arg("null_conf") = 0.7,
        py::arg("unit") = "char");

  m.def("simulate_conversation",
        [](std::uint64_t seed, std::size_t speakers, double duration, double mean_turn,
           double overlap_ratio, const std::string &recording) {
          ConversationSpec spec{seed, speakers, duration, mean_turn, overlap_ratio, recording};
          return emit_rttm(gen_conversation(spec));
        },
        py::arg("seed"), py::arg("speakers") = 2, py::arg("duration") = 300.0,
        py::arg("mean_turn") = 4.0, py::arg("overlap_ratio") = 0.0,
        py::arg("recording") = "sim");
  m.def("simulate_embeddings",
        [](std::uint64_t seed, std::size_t k, std::size_t n_per_cluster, std::size_t dim,
           double noise_sigma) {
          auto fx = gen_embeddings(seed, k, n_per_cluster, dim, noise_sigma);
          return py::make_tuple(emit_embeddings(fx.set), fx.labels);
        },
        py::arg("seed"), py::arg("k") = 4, py::arg("n_per_cluster") = 20, py::arg("dim") = 32,
        py::arg("noise_sigma") = 0.05);

  m.def("run_pipeline",
        [](const std::string &config, bool resume, std::size_t threads) {
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run_pipeline(config, RunOptions{resume, threads});
          }
          py::dict d;
          d["summary"] = r.summary;
          d["executed"] = r.executed;
          d["reused"] = r.reused;
          d["undefined_metric"] = r.undefined_metric;
          return d;
        },
        py::arg("config"), py::arg("resume") = false, py::arg("threads") = 1);
}
