// asdrkit/nmesc.h

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

// Normalized maximum-eigengap spectral clustering (NME-SC).
//
// The cosine affinity between speaker embeddings is sparsified by keeping the
// p strongest links per row. For each candidate p the unnormalized graph
// Laplacian L = D - A is diagonalized and the largest gap g_p among its
// smallest eigenvalues is found. The p minimizing (p / n) / g_p gives the
// affinity used for clustering, and the position of its largest gap gives
// the speaker count.

#ifndef ASDRKIT_NMESC_H_
#define ASDRKIT_NMESC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asdrkit/formats.h"
#include "asdrkit/sym-eigen.h"
#include "asdrkit/timeline.h"

namespace asdrkit {

/// Cosine similarities with an exact unit diagonal. Throws
/// std::invalid_argument naming the window of any zero-norm vector.
Matrix cosine_affinity(const EmbeddingSet &e);

/// Keeps the p largest off-diagonal entries of each row as 1 (ties -> lower
/// column), everything else 0, then returns (B + B^T) / 2.
Matrix binarize_symmetrize(const Matrix &a, std::size_t p);

/// L = D - A with D the row sums of A.
Matrix graph_laplacian(const Matrix &a);

struct NmeCandidate {
  std::size_t p = 0;
  double gap = 0.0;    // g_p
  double ratio = 0.0;  // (p / n) / g_p, +inf when g_p == 0
  std::size_t speakers = 0;
};

struct NmeResult {
  std::size_t best_p = 0;
  std::size_t est_speakers = 1;
  std::vector<NmeCandidate> nme_values;
};

/// Every integer p in [1, min(n - 1, n / 2)].
std::vector<std::size_t> default_p_candidates(std::size_t n);

/// Throws std::invalid_argument for n < 2, max_speakers == 0 or a candidate
/// outside [1, n - 1]; std::runtime_error("degenerate affinity") when every
/// ratio is infinite. An empty candidate list means default_p_candidates.
NmeResult nme_tune(const Matrix &a, std::span<const std::size_t> p_candidates,
                   std::size_t max_speakers);

struct KMeansOptions {
  std::size_t max_iterations = 100;
  std::size_t restarts = 10;
  double tolerance = 1e-6;  // relative inertia change
};

/// Spectral embedding from the k smallest Laplacian eigenvectors, clustered
/// with seeded k-means++. Labels are 0..k-1 numbered by first occurrence.
std::vector<std::size_t> spectral_cluster(const Matrix &a, std::size_t k,
                                          std::uint64_t seed,
                                          const KMeansOptions &opts = {});

struct ClusterOptions {
  std::size_t max_speakers = 4;
  std::vector<std::size_t> p_candidates;  // empty -> defaults
  std::uint64_t seed = 0;
};

struct ClusterResult {
  NmeResult nme;
  std::vector<std::size_t> labels;
  /// Windows as segments labelled "spk<label>".
  Annotation annotation;
};

/// cosine_affinity -> nme_tune -> spectral_cluster on the chosen affinity.
ClusterResult cluster_embeddings(const EmbeddingSet &e,
                                 const ClusterOptions &opts = {});

/// "onset offset label" lines, one per window.
std::string emit_labels(const EmbeddingSet &e,
                        std::span<const std::size_t> labels);

}  // namespace asdrkit

#endif  // ASDRKIT_NMESC_H_
