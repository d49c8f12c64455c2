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

#include <algorithm>
#include <limits>
#include <numeric>

#include "lloyd.hpp"
#include "threeec/errors.hpp"
#include "threeec/kernels.hpp"
#include "threeec/random.hpp"

namespace threeec {
namespace detail {
namespace {

void seed_plus_plus(std::span<const double> pts, std::size_t n, std::size_t dim, int c, Rng& rng,
                    std::vector<double>& centroids) {
  centroids.assign(static_cast<std::size_t>(c) * dim, 0.0);
  std::vector<char> chosen(n, 0);
  auto take = [&](std::size_t i, int slot) {
    chosen[i] = 1;
    std::copy_n(pts.begin() + static_cast<std::ptrdiff_t>(i * dim), dim,
                centroids.begin() + static_cast<std::ptrdiff_t>(slot * dim));
  };

  std::size_t first = rng.below(n);
  take(first, 0);
  std::vector<double> d2(n), fresh(n);
  kernels::squared_distances_to_rows(pts.subspan(first * dim, dim), pts, dim, d2);

  for (int k = 1; k < c; ++k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        cum += d2[i];
        pick = i;
        if (cum > target) break;
      }
    } else {
      // Every point coincides with a centroid; fall back to a uniform unchosen point.
      std::vector<std::size_t> pool;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) pool.push_back(i);
      }
      pick = pool.empty() ? rng.below(n) : pool[rng.below(pool.size())];
    }
    take(pick, k);
    kernels::squared_distances_to_rows(pts.subspan(pick * dim, dim), pts, dim, fresh);
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], fresh[i]);
  }
}

double within_ss(std::span<const double> pts, std::size_t dim, std::span<const int> labels,
                 std::span<const double> centroids) {
  double sse = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sse += kernels::squared_distance(pts.subspan(i * dim, dim),
                                     centroids.subspan(static_cast<std::size_t>(labels[i]) * dim, dim));
  }
  return sse;
}

void update_centroids(std::span<const double> pts, std::size_t dim, std::span<const int> labels,
                      std::span<const std::size_t> counts, std::vector<double>& centroids) {
  std::fill(centroids.begin(), centroids.end(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double* c = centroids.data() + static_cast<std::size_t>(labels[i]) * dim;
    for (std::size_t k = 0; k < dim; ++k) c[k] += pts[i * dim + k];
  }
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    const double inv = 1.0 / static_cast<double>(counts[j]);
    for (std::size_t k = 0; k < dim; ++k) centroids[j * dim + k] *= inv;
  }
}

// Moves the worst-fit point of a multi-member cluster into each empty cluster.
void repair_empty(std::span<const double> pts, std::size_t dim, std::vector<int>& labels,
                  std::vector<double>& dist, std::vector<std::size_t>& counts, std::vector<double>& centroids) {
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] != 0) continue;
    std::size_t worst = labels.size();
    double worst_d = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (counts[static_cast<std::size_t>(labels[i])] < 2) continue;
      if (dist[i] > worst_d) {
        worst_d = dist[i];
        worst = i;
      }
    }
    if (worst == labels.size()) return;  // fewer points than clusters
    --counts[static_cast<std::size_t>(labels[worst])];
    labels[worst] = static_cast<int>(j);
    ++counts[j];
    dist[worst] = 0.0;
    std::copy_n(pts.begin() + static_cast<std::ptrdiff_t>(worst * dim), dim,
                centroids.begin() + static_cast<std::ptrdiff_t>(j * dim));
  }
}

LloydResult lloyd_once(std::span<const double> pts, std::size_t dim, int c, Rng& rng,
                       const KMeansParams& params, double tol_abs) {
  const std::size_t n = pts.size() / dim;
  LloydResult r;
  seed_plus_plus(pts, n, dim, c, rng, r.centroids);
  r.labels.assign(n, 0);
  std::vector<double> dist(n);
  std::vector<std::size_t> counts(static_cast<std::size_t>(c));
  std::vector<double> previous;
  std::vector<int> last_labels;

  for (int it = 1; it <= params.max_iterations; ++it) {
    kernels::nearest_centroids(pts, r.centroids, dim, r.labels, dist);
    std::fill(counts.begin(), counts.end(), 0);
    for (int l : r.labels) ++counts[static_cast<std::size_t>(l)];
    repair_empty(pts, dim, r.labels, dist, counts, r.centroids);

    previous = r.centroids;
    update_centroids(pts, dim, r.labels, counts, r.centroids);
    r.sse = within_ss(pts, dim, r.labels, r.centroids);
    r.sse_trace.push_back(r.sse);
    r.iterations = it;

    double shift = 0.0;
    for (int j = 0; j < c; ++j) {
      shift += kernels::squared_distance(std::span<const double>(previous).subspan(j * dim, dim),
                                         std::span<const double>(r.centroids).subspan(j * dim, dim));
    }
    if (r.labels == last_labels || shift <= tol_abs) {
      r.converged = true;
      break;
    }
    last_labels = r.labels;
  }

  // Final assignment against the last centroids, kept only if it does not empty a cluster.
  std::vector<int> final_labels(n);
  kernels::nearest_centroids(pts, r.centroids, dim, final_labels, dist);
  if (final_labels != r.labels) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int l : final_labels) ++counts[static_cast<std::size_t>(l)];
    if (std::find(counts.begin(), counts.end(), std::size_t{0}) == counts.end()) {
      r.labels = std::move(final_labels);
      update_centroids(pts, dim, r.labels, counts, r.centroids);
      r.sse = within_ss(pts, dim, r.labels, r.centroids);
      r.sse_trace.push_back(r.sse);
    }
  }
  return r;
}

}  // namespace

LloydResult lloyd(std::span<const double> points, std::size_t dim, int c, std::uint64_t seed,
                  const KMeansParams& params) {
  const std::size_t n = points.size() / dim;
  // Tolerance is relative to the average per-feature variance, so it is scale-free.
  double mean_var = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += points[i * dim + k];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = points[i * dim + k] - m;
      v += d * d;
    }
    mean_var += v / static_cast<double>(n);
  }
  mean_var /= static_cast<double>(dim);
  const double tol_abs = params.tolerance * mean_var;

  Rng rng(seed);
  LloydResult best;
  best.sse = std::numeric_limits<double>::infinity();
  for (int r = 0; r < params.restarts; ++r) {
    auto run = lloyd_once(points, dim, c, rng, params, tol_abs);
    if (run.sse < best.sse) best = std::move(run);
  }
  return best;
}

}  // namespace detail

KMeansResult kmeans(const DataMatrix& d, int c, std::uint64_t seed, const KMeansParams& params) {
  const std::size_t n = d.rows();
  const std::size_t dim = d.cols();
  if (c < 1 || static_cast<std::size_t>(c) > n) {
    throw PartitionError("k-means: cluster count " + std::to_string(c) + " outside [1, " + std::to_string(n) + "]");
  }
  const auto order = canonical_row_order(d);
  std::vector<double> pts;
  pts.reserve(n * dim);
  for (auto i : order) {
    const auto r = d.row(i);
    pts.insert(pts.end(), r.begin(), r.end());
  }

  auto run = detail::lloyd(pts, dim, c, seed, params);

  std::vector<int> raw(n);
  for (std::size_t k = 0; k < n; ++k) raw[order[k]] = run.labels[k];

  KMeansResult out;
  out.partition = Partition::from_labels(raw, c);
  out.partition.converged = run.converged;
  if (!run.converged) {
    out.partition.warnings.push_back("k-means did not converge within " + std::to_string(params.max_iterations) +
                                     " iterations; returning best result");
  }
  if (out.partition.has_empty_cluster()) out.partition.warnings.push_back("k-means produced an empty cluster");

  // Reorder centroids to canonical label ids (same numbering rule as canonicalize_labels).
  out.centroids.assign(run.centroids.size(), 0.0);
  std::vector<int> raw_to_canon(static_cast<std::size_t>(c), -1);
  int next = 0;
  for (int l : raw) {
    if (raw_to_canon[static_cast<std::size_t>(l)] < 0) raw_to_canon[static_cast<std::size_t>(l)] = next++;
  }
  for (auto& r : raw_to_canon) {
    if (r < 0) r = next++;
  }
  for (std::size_t j = 0; j < static_cast<std::size_t>(c); ++j) {
    const auto to = static_cast<std::size_t>(raw_to_canon[j]);
    std::copy_n(run.centroids.begin() + static_cast<std::ptrdiff_t>(j * dim), dim,
                out.centroids.begin() + static_cast<std::ptrdiff_t>(to * dim));
  }
  out.sse = run.sse;
  out.sse_trace = std::move(run.sse_trace);
  out.iterations = run.iterations;
  return out;
}

}  // namespace threeec
