// tests/malformed-corpus.h

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

// Systematically broken posterior and embedding files. Each case records
// the line the parser must point at.

#ifndef ASDRKIT_TESTS_MALFORMED_CORPUS_H_
#define ASDRKIT_TESTS_MALFORMED_CORPUS_H_

#include <string>
#include <vector>

namespace asdrkit::corpus {

struct Malformed {
  std::string text;
  std::size_t line;  // 1-based line of the defect
};

inline std::string join_rows(const std::vector<std::string> &rows) {
  std::string out;
  for (const auto &r : rows) out += r + "\n";
  return out;
}

inline std::vector<Malformed> malformed_posteriors() {
  const std::string header = "#posteriors rec1 0.01 spkA spkB spkC";
  const std::vector<std::string> good = {"0.1\t0.2\t0.3", "1\t0\t0.5",
                                         "0.25\t0.75\t1.0", "0\t0\t0"};
  const std::vector<std::string> bad_rows = {
      "0.1\t0.2",          "0.1\t0.2\t0.3\t0.4", "1.5\t0\t0",
      "0\t-0.1\t0",        "abc\t0\t0",          "0\t\t0",
      "0\t0\t1..0",        "nan\t0\t0",          "0\tinf\t0",
      "0 0 0",             "",                   "0\t0\t0x1",
      "0\t0\t1e",          "\t0\t0\t",           "0,1\t0\t0",
      "0\t0\t1.0000001",   "-0\t0\t-1e-300",     "0\t0\t0\t",
  };
  std::vector<Malformed> out;
  for (std::size_t at = 0; at <= good.size(); ++at) {
    for (const auto &bad : bad_rows) {
      std::vector<std::string> rows{header};
      for (std::size_t i = 0; i < good.size(); ++i) {
        if (i == at) rows.push_back(bad);
        rows.push_back(good[i]);
      }
      if (at == good.size()) rows.push_back(bad);
      // Blank lines are only defects in the middle of the matrix.
      if (bad.empty() && at == good.size()) continue;
      out.push_back({join_rows(rows), at + 2});
    }
  }
  const std::vector<std::string> bad_headers = {
      "",
      "#posterior rec1 0.01 spkA",
      "posteriors rec1 0.01 spkA",
      "#posteriors rec1 0.01",
      "#posteriors rec1",
      "#posteriors rec1 0 spkA",
      "#posteriors rec1 -0.01 spkA",
      "#posteriors rec1 abc spkA",
      "#posteriors rec1 nan spkA",
      "#posteriors rec1 inf spkA",
      "#posteriors rec1 0.01 spkA spkA",
      "#posteriors rec1 0.01 spkA spkB spkA",
      "0.1\t0.2\t0.3",
  };
  for (const auto &h : bad_headers) {
    out.push_back({join_rows({h, "0\t0\t0"}), 1});
  }
  out.push_back({"", 1});
  return out;
}

inline std::vector<Malformed> malformed_embeddings() {
  const std::string header = "#embeddings rec1 3";
  const std::vector<std::string> good = {"0.0 1.5 0.1 0.2 0.3",
                                         "0.75 2.25 -1 0 1e-3",
                                         "1.5 3.0 4 5 6"};
  const std::vector<std::string> bad_rows = {
      "0.0 1.5 0.1 0.2",       "0.0 1.5 0.1 0.2 0.3 0.4", "0.0 1.5",
      "0.0",                   "x 1.5 0.1 0.2 0.3",      "0.0 y 0.1 0.2 0.3",
      "0.0 1.5 0.1 z 0.3",     "0.0 1.5 nan 0.2 0.3",    "0.0 1.5 0.1 inf 0.3",
      "-1 1.5 0.1 0.2 0.3",    "1.5 1.5 0.1 0.2 0.3",    "2.0 1.0 0.1 0.2 0.3",
      "0.0 1.5 0.1 0.2 0.3x",  "0.0 1.5 0.1 -inf 0.3",   "0.0 1.5 1e999 0 0",
  };
  std::vector<Malformed> out;
  for (std::size_t at = 0; at <= good.size(); ++at) {
    for (const auto &bad : bad_rows) {
      std::vector<std::string> rows{header};
      for (std::size_t i = 0; i < good.size(); ++i) {
        if (i == at) rows.push_back(bad);
        rows.push_back(good[i]);
      }
      if (at == good.size()) rows.push_back(bad);
      out.push_back({join_rows(rows), at + 2});
    }
  }
  const std::vector<std::string> bad_headers = {
      "",
      "#embedding rec1 3",
      "#embeddings rec1",
      "#embeddings rec1 0",
      "#embeddings rec1 -3",
      "#embeddings rec1 three",
      "#embeddings rec1 3 4",
      "#embeddings rec1 99999999999999999999",
      "0.0 1.5 0.1 0.2 0.3",
  };
  for (const auto &h : bad_headers) {
    out.push_back({join_rows({h, good[0]}), 1});
  }
  out.push_back({"", 1});
  return out;
}

}  // namespace asdrkit::corpus

#endif  // ASDRKIT_TESTS_MALFORMED_CORPUS_H_
