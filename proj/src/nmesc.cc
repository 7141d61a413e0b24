// asdrkit/nmesc.cc

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

#include "asdrkit/nmesc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "asdrkit/random.h"

namespace asdrkit {

Matrix cosine_affinity(const EmbeddingSet &e) {
  const std::size_t n = e.items.size();
  if (n == 0) throw std::invalid_argument("no embeddings to compare");
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto &v = e.items[i].vector;
    double sq = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
    if (!(sq > 0.0)) {
      throw std::invalid_argument(
          "zero-norm embedding for window " + std::to_string(i) + " (" +
          format_ticks(e.items[i].onset) + "-" + format_ticks(e.items[i].offset) +
          ")");
    }
    norms[i] = std::sqrt(sq);
  }
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto &u = e.items[i].vector;
      const auto &v = e.items[j].vector;
      if (u.size() != v.size()) {
        throw std::invalid_argument("embedding dimension mismatch");
      }
      double c = std::inner_product(u.begin(), u.end(), v.begin(), 0.0) /
                 (norms[i] * norms[j]);
      c = std::clamp(c, -1.0, 1.0);
      a(i, j) = a(j, i) = c;
    }
  }
  return a;
}

Matrix binarize_symmetrize(const Matrix &a, std::size_t p) {
  const std::size_t n = a.size();
  if (p < 1 || p >= n) {
    throw std::invalid_argument("neighbor count p must be in [1, n-1]");
  }
  Matrix b(n);
  std::vector<std::size_t> cols;
  cols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cols.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) cols.push_back(j);
    std::partial_sort(cols.begin(), cols.begin() + static_cast<long>(p),
                      cols.end(), [&](std::size_t x, std::size_t y) {
                        if (a(i, x) != a(i, y)) return a(i, x) > a(i, y);
                        return x < y;
                      });
    for (std::size_t k = 0; k < p; ++k) b(i, cols[k]) = 1.0;
  }
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (b(i, j) + b(j, i));
  return out;
}

Matrix graph_laplacian(const Matrix &a) {
  const std::size_t n = a.size();
  Matrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      degree += a(i, j);
      l(i, j) = -a(i, j);
    }
    l(i, i) += degree;
  }
  return l;
}

std::vector<std::size_t> default_p_candidates(std::size_t n) {
  std::vector<std::size_t> out;
  if (n < 2) return out;
  const std::size_t hi = std::min(n - 1, n / 2);
  for (std::size_t p = 1; p <= hi; ++p) out.push_back(p);
  return out;
}

NmeResult nme_tune(const Matrix &a, std::span<const std::size_t> p_candidates,
                   std::size_t max_speakers) {
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("need at least two embeddings");
  if (max_speakers == 0) throw std::invalid_argument("max_speakers must be >= 1");
  std::vector<std::size_t> candidates(p_candidates.begin(), p_candidates.end());
  if (candidates.empty()) candidates = default_p_candidates(n);
  for (auto p : candidates) {
    if (p < 1 || p >= n) {
      throw std::invalid_argument("p candidate " + std::to_string(p) +
                                  " outside [1, n-1]");
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  NmeResult res;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (auto p : candidates) {
    auto eig = symmetric_eigen(graph_laplacian(binarize_symmetrize(a, p)));
    const auto &lam = eig.values;
    NmeCandidate cand{p, 0.0, std::numeric_limits<double>::infinity(), 1};
    const std::size_t kmax = std::min(max_speakers, n - 1);
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double gap = lam[k] - lam[k - 1];
      if (gap > cand.gap) {
        cand.gap = gap;
        cand.speakers = k;
      }
    }
    // Gaps at round-off level count as no gap at all.
    const double floor = 1e-10 * std::max(1.0, std::fabs(lam.back()));
    if (cand.gap > floor) {
      cand.ratio = (static_cast<double>(p) / static_cast<double>(n)) / cand.gap;
    }
    if (cand.ratio < best_ratio) {
      best_ratio = cand.ratio;
      res.best_p = p;
      res.est_speakers = cand.speakers;
    }
    res.nme_values.push_back(cand);
  }
  if (!std::isfinite(best_ratio)) {
    throw std::runtime_error("degenerate affinity");
  }
  return res;
}

namespace {

double sq_dist(const double *x, const double *y, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double t = x[d] - y[d];
    s += t * t;
  }
  return s;
}

struct KMeansRun {
  std::vector<std::size_t> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

// points: n x dim row-major.
KMeansRun kmeans_once(const std::vector<double> &points, std::size_t n,
                      std::size_t dim, std::size_t k, Xoshiro256 &rng,
                      const KMeansOptions &opts) {
  std::vector<double> centers(k * dim);
  std::vector<double> closest(n, std::numeric_limits<double>::infinity());
  // k-means++ seeding.
  std::size_t first = rng.index(n);
  std::copy_n(&points[first * dim], dim, &centers[0]);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], sq_dist(&points[i * dim],
                                                &centers[(c - 1) * dim], dim));
      total += closest[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= closest[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.index(n);
    }
    std::copy_n(&points[pick * dim], dim, &centers[c * dim]);
  }

  KMeansRun run;
  run.labels.assign(n, 0);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        double d = sq_dist(&points[i * dim], &centers[c * dim], dim);
        if (d < best) {
          best = d;
          run.labels[i] = c;
        }
      }
      closest[i] = best;
      inertia += best;
    }
    run.inertia = inertia;
    if (std::isfinite(prev) &&
        prev - inertia <= opts.tolerance * std::max(prev, 1e-300)) {
      break;
    }
    prev = inertia;

    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[run.labels[i]];
      for (std::size_t d = 0; d < dim; ++d)
        sums[run.labels[i] * dim + d] += points[i * dim + d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the worst-fitted point.
        std::size_t far = static_cast<std::size_t>(
            std::max_element(closest.begin(), closest.end()) - closest.begin());
        std::copy_n(&points[far * dim], dim, &centers[c * dim]);
        closest[far] = 0.0;
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d)
        centers[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
    }
  }
  return run;
}

std::vector<std::size_t> renumber_by_first_occurrence(
    const std::vector<std::size_t> &labels, std::size_t k) {
  std::vector<std::size_t> remap(k, k);
  std::size_t next = 0;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (remap[labels[i]] == k) remap[labels[i]] = next++;
    out[i] = remap[labels[i]];
  }
  return out;
}

}  // namespace

std::vector<std::size_t> spectral_cluster(const Matrix &a, std::size_t k,
                                          std::uint64_t seed,
                                          const KMeansOptions &opts) {
  const std::size_t n = a.size();
  if (k < 1 || k > n) {
    throw std::invalid_argument("cluster count must be in [1, n]");
  }
  if (k == 1) return std::vector<std::size_t>(n, 0);
  auto eig = symmetric_eigen(graph_laplacian(a));
  std::vector<double> points(n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c) points[i * k + c] = eig.vectors(i, c);

  Xoshiro256 rng(seed);
  KMeansRun best;
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    KMeansRun run = kmeans_once(points, n, k, k, rng, opts);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return renumber_by_first_occurrence(best.labels, k);
}

ClusterResult cluster_embeddings(const EmbeddingSet &e,
                                 const ClusterOptions &opts) {
  ClusterResult res;
  const std::size_t n = e.items.size();
  Matrix affinity = cosine_affinity(e);
  if (n == 1) {
    res.nme.est_speakers = 1;
    res.labels.assign(1, 0);
  } else {
    res.nme = nme_tune(affinity, opts.p_candidates, opts.max_speakers);
    res.labels = spectral_cluster(binarize_symmetrize(affinity, res.nme.best_p),
                                  res.nme.est_speakers, opts.seed);
  }
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < n; ++i) {
    segs.push_back({e.recording, "spk" + std::to_string(res.labels[i]),
                    e.items[i].onset, e.items[i].offset - e.items[i].onset});
  }
  res.annotation = canonicalize(e.recording, std::move(segs));
  return res;
}

std::string emit_labels(const EmbeddingSet &e,
                        std::span<const std::size_t> labels) {
  if (labels.size() != e.items.size()) {
    throw std::invalid_argument("one label per embedding window required");
  }
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += format_ticks(e.items[i].onset) + " " + format_ticks(e.items[i].offset) +
           " " + std::to_string(labels[i]) + "\n";
  }
  return out;
}

}  // namespace asdrkit
