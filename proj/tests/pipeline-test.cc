// tests/pipeline-test.cc

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

#include <filesystem>
#include <string>

#include "asdrkit/pipeline.h"
#include "asdrkit/simulate.h"
#include "doctest.h"

namespace fs = std::filesystem;
using namespace asdrkit;

namespace {

fs::path fresh_dir(const std::string &name) {
  fs::path d = fs::temp_directory_path() / ("asdrkit-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char *kConfig = R"({
  "output_dir": "out",
  "stages": [
    {"name": "truth", "type": "simulate", "seed": 3, "speakers": 2, "duration": 60},
    {"name": "a", "type": "corrupt-rttm", "input": "truth", "seed": 1, "jitter": 0.2},
    {"name": "b", "type": "corrupt-rttm", "input": "truth", "seed": 2, "label_swap_rate": 0.2},
    {"name": "pa", "type": "simulate-posteriors", "input": "a", "noise_sigma": 0.1, "seed": 4},
    {"name": "ha", "type": "post-process", "input": "pa"},
    {"name": "fused", "type": "fuse-rttm", "inputs": ["ha", "b"]},
    {"name": "der_a", "type": "score-der", "ref": "truth", "hyp": "ha"},
    {"name": "der_f", "type": "score-der", "ref": "truth", "hyp": "fused", "label": "fusion"},
    {"name": "words", "type": "simulate-transcripts", "input": "truth", "seed": 5},
    {"name": "w1", "type": "corrupt-transcripts", "input": "words", "seed": 6, "sub_rate": 0.1},
    {"name": "w2", "type": "corrupt-transcripts", "input": "words", "seed": 7, "sub_rate": 0.1},
    {"name": "w3", "type": "corrupt-transcripts", "input": "words", "seed": 8, "sub_rate": 0.1},
    {"name": "rover", "type": "fuse-text", "inputs": ["w1", "w2", "w3"]},
    {"name": "cer1", "type": "score-cer", "ref": "words", "hyp": "w1"},
    {"name": "cer_r", "type": "score-cer", "ref": "words", "hyp": "rover"},
    {"name": "cp", "type": "score-cpcer", "ref": "words", "hyp": "rover"},
    {"name": "emb", "type": "simulate-embeddings", "seed": 9, "k": 3, "n_per_cluster": 10},
    {"name": "clusters", "type": "cluster", "input": "emb"}
  ],
  "comparisons": [{"baseline": "der_a", "system": "der_f"},
                  {"baseline": "cer1", "system": "cer_r"}]
})";

std::string slurp_dir(const fs::path &d) {
  std::string all;
  for (const auto &e : fs::directory_iterator(d)) {
    if (e.path().filename() == ".asdrkit-state.json") continue;
    all += e.path().filename().string() + "\n" + read_file(e.path().string());
  }
  return all;
}

}  // namespace

TEST_CASE("run_pipeline is deterministic and resumable") {
  const fs::path d = fresh_dir("resume");
  const std::string cfg = (d / "p.json").string();
  write_file(cfg, kConfig);

  auto first = run_pipeline(cfg, {});
  CHECK(first.executed.size() == 18);
  CHECK(first.reused.empty());
  CHECK_FALSE(first.undefined_metric);
  CHECK(first.summary.find("absolute reduction") != std::string::npos);
  CHECK(first.summary.find("fusion") != std::string::npos);
  CHECK(read_file((d / "out" / "summary.txt").string()) == first.summary);
  const std::string files = slurp_dir(d / "out");

  auto again = run_pipeline(cfg, {});
  CHECK(again.summary == first.summary);
  CHECK(slurp_dir(d / "out") == files);

  auto resumed = run_pipeline(cfg, {true, 2});
  CHECK(resumed.executed.empty());
  CHECK(resumed.reused.size() == 18);
  CHECK(resumed.summary == first.summary);

  // A damaged intermediate is recomputed along with nothing else whose
  // inputs are unchanged.
  write_file((d / "out" / "ha.rttm").string(), "garbage\n");
  auto repaired = run_pipeline(cfg, {true, 1});
  CHECK(repaired.executed == std::vector<std::string>{"ha"});
  CHECK(slurp_dir(d / "out") == files);
}

TEST_CASE("file inputs are resolved against the config directory") {
  const fs::path d = fresh_dir("files");
  ConversationSpec spec;
  spec.seed = 11;
  spec.duration = 30;
  write_file((d / "ref.rttm").string(), emit_rttm(gen_conversation(spec)));
  write_file((d / "p.json").string(), R"({"stages": [
      {"name": "s", "type": "score-der", "ref": "ref.rttm", "hyp": "ref.rttm"}]})");
  auto r = run_pipeline((d / "p.json").string(), {});
  CHECK(r.summary.find("0.00%") != std::string::npos);
  write_file((d / "empty.rttm").string(), "");
  write_file((d / "q.json").string(), R"({"stages": [
      {"name": "s", "type": "score-der", "ref": "empty.rttm", "hyp": "ref.rttm"}]})");
  CHECK(run_pipeline((d / "q.json").string(), {}).undefined_metric);
}

TEST_CASE("config errors name the file and the place") {
  const fs::path d = fresh_dir("errors");
  const std::string cfg = (d / "p.json").string();
  auto message = [&](const std::string &text) {
    write_file(cfg, text);
    try {
      run_pipeline(cfg, {});
    } catch (const InputError &e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n  \"stages\": [\n    {\"name\": \"x\",}\n  ]\n}").rfind(cfg + ":3:", 0) == 0);
  CHECK(message(R"({"stages": []})") == cfg + ": 'stages' must be a non-empty list");
  CHECK(message(R"({"stages": [{"name": "x", "type": "dance"}]})") ==
        cfg + ": stage 1 ('x'): unknown stage type 'dance'");
  CHECK(message(R"({"stages": [{"name": "x", "type": "simulate", "seed": 1, "colour": 2}]})") ==
        cfg + ": stage 1 ('x'): unknown field 'colour' for type 'simulate'");
  CHECK(message(R"({"stages": [{"name": "x", "type": "simulate"}]})") ==
        cfg + ": stage 1 ('x'): missing field 'seed'");
  CHECK(message(R"({"stages": [{"name": "x", "type": "post-process", "input": "later"}]})") ==
        cfg + ": stage 1 ('x'): input 'later' is neither an earlier stage nor an existing file");
  CHECK(message(R"({"stages": [{"name": "x", "type": "simulate", "seed": 1, "speakers": 0}]})")
            .rfind(cfg + ": stage 1 ('x'): ", 0) == 0);

  write_file((d / "bad.rttm").string(), "SPEAKER r 1 0 1 <NA> <NA> a <NA> <NA>\nSPEAKER r 1 x\n");
  CHECK(message(R"({"stages": [{"name": "x", "type": "fuse-rttm", "inputs": ["bad.rttm"]}]})")
            .rfind((d / "bad.rttm").string() + ":2:", 0) == 0);
}

TEST_CASE("loaders attach the path") {
  CHECK_THROWS_WITH_AS(load_rttm("/nonexistent/x.rttm"),
                       "/nonexistent/x.rttm: cannot open for reading", InputError);
  const fs::path d = fresh_dir("loaders");
  write_file((d / "p.tsv").string(), "frame\ta\n0\t2.0\n");
  CHECK_THROWS_AS(load_posteriors((d / "p.tsv").string()), InputError);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
