// tests/tsvad-post-test.cc

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

#include "asdrkit/tsvad-post.h"

#include <stdexcept>

#include "asdrkit/simulate.h"
#include "doctest.h"

namespace asdrkit {
namespace {

PosteriorMatrix column(std::vector<double> v, double shift = 0.1) {
  PosteriorMatrix p;
  p.recording = "r";
  p.frame_shift = shift;
  p.speakers = {"A"};
  p.frames = v.size();
  p.values = std::move(v);
  return p;
}

std::vector<bool> track(const PosteriorMatrix &p, const PostProcessConfig &cfg) {
  auto t = binarize(p, cfg);
  REQUIRE(t.size() == 1);
  return t[0];
}

TEST_CASE("median filter") {
  auto p = column({0.3, 0.9, 0.1, 0.5});
  CHECK(median_filter(p, 1) == p);
  CHECK(median_filter(column({0, 0, 1, 0, 0}), 3).values ==
        std::vector<double>{0, 0, 0, 0, 0});
  CHECK(median_filter(column({1, 1, 0, 1, 1}), 3).values ==
        std::vector<double>{1, 1, 1, 1, 1});
  CHECK(median_filter(column({0, 1, 1}), 5).values == std::vector<double>{0, 1, 1});
  CHECK_THROWS_AS(median_filter(p, 4), std::invalid_argument);
  CHECK_THROWS_AS(median_filter(p, 0), std::invalid_argument);
}

TEST_CASE("hysteresis") {
  PostProcessConfig cfg;
  CHECK(track(column({1, 1, 1}), cfg) == std::vector<bool>{true, true, true});
  cfg.onset_threshold = 0.6;
  cfg.offset_threshold = 0.4;
  CHECK(track(column({0.5, 0.7, 0.5, 0.3}), cfg) ==
        std::vector<bool>{false, true, true, false});
  cfg.onset_threshold = cfg.offset_threshold = 0.5;
  CHECK(track(column({0.5, 0.49}), cfg) == std::vector<bool>{true, false});
}

TEST_CASE("tracks to segments") {
  std::vector<ActivityTrack> tracks{{true, true, false, true}};
  std::vector<std::string> spk{"A"};
  PostProcessConfig cfg;
  cfg.min_silence = 0;
  cfg.min_speech = 0;
  auto a = tracks_to_segments(tracks, 0.1, cfg, "r", spk);
  REQUIRE(a.size() == 2);
  CHECK(a.segments()[0].interval() == Interval{0, 2000});
  CHECK(a.segments()[1].interval() == Interval{3000, 4000});

  cfg.min_silence = 0.15;
  auto merged = tracks_to_segments(tracks, 0.1, cfg, "r", spk);
  REQUIRE(merged.size() == 1);
  CHECK(merged.segments()[0].interval() == Interval{0, 4000});

  cfg.min_silence = 0;
  cfg.min_speech = 0.25;
  CHECK(tracks_to_segments(tracks, 0.1, cfg, "r", spk).empty());
}

TEST_CASE("config validation") {
  PostProcessConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.offset_threshold = 0.7;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.median_window = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.min_speech = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("clean posteriors recover the annotation") {
  ConversationSpec spec;
  spec.seed = 4;
  spec.n_speakers = 3;
  spec.duration = 120;
  spec.overlap_ratio = 0.1;
  auto truth = gen_conversation(spec);
  auto speakers = truth.speakers();
  auto post = gen_posteriors(truth, 0.01, speakers, spec.duration);
  PostProcessConfig cfg;
  cfg.median_window = 1;
  cfg.min_speech = 0;
  cfg.min_silence = 0;
  auto a = post_process(post, cfg);
  REQUIRE(a.size() == truth.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.segments()[i].speaker == truth.segments()[i].speaker);
    CHECK(std::abs(a.segments()[i].onset - truth.segments()[i].onset) <= 100);
    CHECK(std::abs(a.segments()[i].offset() - truth.segments()[i].offset()) <= 100);
  }
  CHECK(post_process(post, cfg) == a);
}

}  // namespace
}  // namespace asdrkit
