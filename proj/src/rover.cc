// asdrkit/rover.cc

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

#include "asdrkit/rover.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asdrkit {

namespace {

constexpr double kScoreEps = 1e-9;

bool slot_matches(const WtnSlot &slot, const std::string &token) {
  return std::any_of(slot.tokens.begin(), slot.tokens.end(),
                     [&](const auto &t) { return t && *t == token; });
}

// Aligns one more system into the network.
std::size_t align_into(WordTransitionNetwork &wtn,
                       const std::vector<std::string> &hyp,
                       const std::vector<double> *conf) {
  const std::size_t m = wtn.slots.size(), l = hyp.size();
  const std::size_t prior = wtn.num_systems;
  // cost[i][j]: first i slots against first j tokens.
  std::vector<std::size_t> cost((m + 1) * (l + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t & {
    return cost[i * (l + 1) + j];
  };
  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= l; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= l; ++j) {
      const std::size_t diag =
          at(i - 1, j - 1) + (slot_matches(wtn.slots[i - 1], hyp[j - 1]) ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  std::vector<WtnSlot> rebuilt;
  rebuilt.reserve(std::max(m, l));
  auto token_conf = [&](std::size_t j) -> std::optional<double> {
    if (!conf) return std::nullopt;
    return (*conf)[j];
  };
  std::size_t i = m, j = l;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) +
                        (slot_matches(wtn.slots[i - 1], hyp[j - 1]) ? 0 : 1)) {
      WtnSlot s = std::move(wtn.slots[i - 1]);
      s.tokens.push_back(hyp[j - 1]);
      s.confidences.push_back(token_conf(j - 1));
      rebuilt.push_back(std::move(s));
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      WtnSlot s = std::move(wtn.slots[i - 1]);
      s.tokens.push_back(std::nullopt);
      s.confidences.push_back(std::nullopt);
      rebuilt.push_back(std::move(s));
      --i;
    } else {
      WtnSlot s;
      s.tokens.assign(prior, std::nullopt);
      s.confidences.assign(prior, std::nullopt);
      s.tokens.push_back(hyp[j - 1]);
      s.confidences.push_back(token_conf(j - 1));
      rebuilt.push_back(std::move(s));
      --j;
    }
  }
  std::reverse(rebuilt.begin(), rebuilt.end());
  wtn.slots = std::move(rebuilt);
  ++wtn.num_systems;
  return at(m, l);
}

}  // namespace

WordTransitionNetwork build_wtn(std::span<const std::vector<std::string>> hyps,
                                std::span<const std::vector<double>> confidences) {
  if (hyps.empty()) throw std::invalid_argument("no hypotheses to align");
  if (!confidences.empty()) {
    if (confidences.size() != hyps.size()) {
      throw std::invalid_argument("one confidence vector per hypothesis required");
    }
    for (std::size_t s = 0; s < hyps.size(); ++s) {
      if (confidences[s].size() != hyps[s].size()) {
        throw std::invalid_argument("confidence count differs from token count");
      }
      for (double c : confidences[s]) {
        if (!(c >= 0.0 && c <= 1.0)) {
          throw std::invalid_argument("confidence outside [0, 1]");
        }
      }
    }
  }
  WordTransitionNetwork wtn;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    const std::vector<double> *conf = confidences.empty() ? nullptr : &confidences[s];
    std::size_t c = align_into(wtn, hyps[s], conf);
    wtn.alignment_costs.push_back(s == 0 ? 0 : c);
  }
  return wtn;
}

std::vector<std::string> vote(const WordTransitionNetwork &wtn, double alpha,
                              double null_conf) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(null_conf >= 0.0 && null_conf <= 1.0)) {
    throw std::invalid_argument("alpha and null_conf must be in [0, 1]");
  }
  const double ns = static_cast<double>(wtn.num_systems);
  std::vector<std::string> out;
  for (const auto &slot : wtn.slots) {
    struct Candidate {
      std::optional<std::string> token;
      std::size_t count = 0;
      double conf_sum = 0.0;
      std::size_t first_system = 0;
    };
    std::vector<Candidate> cands;  // in order of first appearance
    for (std::size_t s = 0; s < slot.tokens.size(); ++s) {
      const auto &tok = slot.tokens[s];
      auto it = std::find_if(cands.begin(), cands.end(),
                             [&](const Candidate &c) { return c.token == tok; });
      if (it == cands.end()) {
        cands.push_back({tok, 0, 0.0, s});
        it = cands.end() - 1;
      }
      ++it->count;
      it->conf_sum += tok ? slot.confidences[s].value_or(1.0) : null_conf;
    }
    const Candidate *best = nullptr;
    long long best_score = 0;
    for (const auto &c : cands) {
      const double meanconf = c.token ? c.conf_sum / static_cast<double>(c.count)
                                      : null_conf;
      const double score = alpha * (static_cast<double>(c.count) / ns) +
                           (1.0 - alpha) * meanconf;
      const long long q = std::llround(score / kScoreEps);
      bool better = best == nullptr || q > best_score;
      if (!better && q == best_score) {
        if (c.token && !best->token) {
          better = true;
        } else if (c.token.has_value() == best->token.has_value()) {
          better = c.first_system < best->first_system;
        }
      }
      if (better) {
        best = &c;
        best_score = q;
      }
    }
    if (best && best->token) out.push_back(*best->token);
  }
  return out;
}

TranscriptSet fuse_transcripts(std::span<const TranscriptSet> systems,
                               const RoverOptions &opts) {
  if (systems.empty()) throw std::invalid_argument("no transcript systems to fuse");
  for (std::size_t s = 1; s < systems.size(); ++s) {
    bool same = systems[s].size() == systems[0].size() &&
                std::equal(systems[s].begin(), systems[s].end(), systems[0].begin(),
                           [](const auto &a, const auto &b) { return a.first == b.first; });
    if (!same) {
      throw std::invalid_argument("transcript system " + std::to_string(s + 1) +
                                  " has different utterance ids than system 1");
    }
  }
  TranscriptSet out;
  std::vector<std::vector<std::string>> hyps(systems.size());
  for (const auto &[key, _] : systems[0]) {
    for (std::size_t s = 0; s < systems.size(); ++s) {
      hyps[s] = tokenize(systems[s].at(key), opts.tokens);
    }
    out.emplace(key, vote(build_wtn(hyps), opts.alpha, opts.null_conf));
  }
  return out;
}

}  // namespace asdrkit
