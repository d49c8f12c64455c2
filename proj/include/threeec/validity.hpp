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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "threeec/data_matrix.hpp"

namespace threeec {

enum class IndexKind { Silhouette, CalinskiHarabasz, DaviesBouldin };

/// Which side of the scale is good.
enum class Direction { HigherBetter, LowerBetter };

std::string_view to_string(IndexKind kind) noexcept;
std::string_view to_string(Direction direction) noexcept;
/// Fixed per kind: Silhouette and Calinski-Harabasz are higher-better, Davies-Bouldin lower-better.
Direction direction_of(IndexKind kind) noexcept;

/// One member of the index ensemble, with its quality threshold.
struct IndexSpec {
  IndexKind kind = IndexKind::Silhouette;
  double lambda = 0.0;
  std::string name;

  Direction direction() const noexcept { return direction_of(kind); }
};

struct Score {
  double value = 0.0;
  bool breached = false;
};

/// True when `value` lies strictly on the poor side of the threshold. A value equal to lambda is acceptable.
/// +inf never breaches a higher-better index and always breaches a lower-better one; NaN always breaches.
bool is_breach(const IndexSpec& spec, double value) noexcept;
Score score(const IndexSpec& spec, double value) noexcept;

/// Dense n x n Euclidean distance matrix, computed once per node and shared by every candidate partition.
class PairwiseDistances {
 public:
  explicit PairwiseDistances(const DataMatrix& d);
  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> dist_;
};

// Index implementations. All use Euclidean distance. Degenerate denominators
// produce +infinity rather than an error so candidates can still be ranked.

/// Mean silhouette width; points in singleton clusters contribute 0. Requires c >= 2 and no empty cluster.
double silhouette(const DataMatrix& d, const Partition& p);
double silhouette(const DataMatrix& d, const Partition& p, const PairwiseDistances& dist);

/// (BGSS / (c - 1)) / (WGSS / (n - c)). Requires 2 <= c <= n - 1; +inf when WGSS == 0.
double calinski_harabasz(const DataMatrix& d, const Partition& p);

/// Mean over clusters of the worst (S_i + S_j) / M_ij ratio; +inf when two centroids coincide.
double davies_bouldin(const DataMatrix& d, const Partition& p);

/// Dispatches on kind; `dist` is optional and only used by the silhouette.
double evaluate(IndexKind kind, const DataMatrix& d, const Partition& p, const PairwiseDistances* dist = nullptr);

}  // namespace threeec
