/*
 * Copyright (c) 2026, The threeec Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "threeec/data_matrix.hpp"

namespace threeec {

enum class PartitionerKind { KMeans, Agglomerative, Spectral };
enum class Linkage { Ward, Complete, Average, Single };

std::string_view to_string(PartitionerKind kind) noexcept;
std::string_view to_string(Linkage linkage) noexcept;

struct KMeansParams {
  int restarts = 10;
  int max_iterations = 300;
  /// Convergence threshold on total squared centroid movement, relative to the mean feature variance.
  double tolerance = 1e-6;
};

struct AgglomerativeParams {
  Linkage linkage = Linkage::Ward;
};

struct SpectralParams {
  /// k in the symmetric k-nearest-neighbor affinity graph; a point counts as its own first neighbor.
  int neighbors = 10;
  /// Maximum eigen-residual ||L v - lambda v|| accepted from the eigensolver.
  double eigen_tolerance = 1e-8;
  /// Lloyd settings for clustering the spectral embedding.
  KMeansParams embedding{};
};

/// One member of the algorithm ensemble: a partitioning method and its fixed parameters.
struct PartitionerSpec {
  std::string name;
  std::variant<KMeansParams, AgglomerativeParams, SpectralParams> params;

  PartitionerKind kind() const noexcept;
  /// Throws ConfigError if a parameter is out of range.
  void validate() const;

  static PartitionerSpec kmeans(std::string name = "K-Means", KMeansParams p = {});
  static PartitionerSpec agglomerative(std::string name = "Agglomerative", AgglomerativeParams p = {});
  static PartitionerSpec spectral(std::string name = "Spectral-NN", SpectralParams p = {});
};

/**
 * Partitions `d` into `c` clusters, 2 <= c <= n.
 *
 * Deterministic for fixed (spec, data, c, seed). Rows are first sorted into a
 * canonical lexicographic order before any seeding or tie-breaking, so
 * permuting the input rows permutes the labels identically. c == n always
 * yields the all-singletons partition.
 */
Partition partition(const PartitionerSpec& spec, const DataMatrix& d, int c, std::uint64_t seed);

struct KMeansResult {
  Partition partition;
  /// c x p row-major centroids, indexed by canonical label.
  std::vector<double> centroids;
  double sse = 0.0;
  /// Within-cluster SSE after every Lloyd iteration of the winning restart.
  std::vector<double> sse_trace;
  int iterations = 0;
};

/// Lloyd iterations from k-means++ seeding; keeps the lowest-SSE restart.
KMeansResult kmeans(const DataMatrix& d, int c, std::uint64_t seed, const KMeansParams& params = {});

/// Bottom-up merging (nearest-neighbor chain, Lance-Williams updates) cut at c clusters.
Partition agglomerative(const DataMatrix& d, int c, Linkage linkage = Linkage::Ward);

/// Normalized-Laplacian embedding of a symmetric kNN graph, row-normalized, then k-means.
Partition spectral(const DataMatrix& d, int c, std::uint64_t seed, const SpectralParams& params = {});

/// Positions of d's rows sorted lexicographically by value (stable for equal rows).
std::vector<std::size_t> canonical_row_order(const DataMatrix& d);

}  // namespace threeec
