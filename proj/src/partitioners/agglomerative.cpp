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
#include <cmath>
#include <limits>
#include <numeric>

#include "threeec/errors.hpp"
#include "threeec/kernels.hpp"
#include "threeec/partitioners.hpp"

namespace threeec {
namespace {

struct Merge {
  std::size_t a;
  std::size_t b;
  double height;
};

// Lance-Williams dissimilarity between cluster k and the union of i and j.
double lance_williams(Linkage linkage, double d_ki, double d_kj, double d_ij, double n_i, double n_j,
                      double n_k) {
  switch (linkage) {
    case Linkage::Ward:
      return ((n_i + n_k) * d_ki + (n_j + n_k) * d_kj - n_k * d_ij) / (n_i + n_j + n_k);
    case Linkage::Complete: return std::max(d_ki, d_kj);
    case Linkage::Average: return (n_i * d_ki + n_j * d_kj) / (n_i + n_j);
    case Linkage::Single: return std::min(d_ki, d_kj);
  }
  return d_ki;
}

// Nearest-neighbor chain; valid because all four linkages are reducible.
// Each cluster lives in the slot of one of its member points, so merges can
// be replayed on points with union-find afterwards.
std::vector<Merge> nn_chain(std::vector<double> dist, std::size_t n, Linkage linkage) {
  std::vector<char> active(n, 1);
  std::vector<double> size(n, 1.0);
  std::vector<std::size_t> chain;
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  auto D = [&](std::size_t i, std::size_t j) -> double& { return dist[i * n + j]; };

  std::size_t remaining = n;
  while (remaining > 1) {
    if (chain.empty()) {
      std::size_t first = 0;
      while (!active[first]) ++first;
      chain.push_back(first);
    }
    std::size_t a = 0;
    std::size_t b = 0;
    while (true) {
      a = chain.back();
      const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : n;
      // Ties prefer the previous chain element, which guarantees termination.
      double best = prev < n ? D(a, prev) : std::numeric_limits<double>::infinity();
      b = prev;
      for (std::size_t x = 0; x < n; ++x) {
        if (!active[x] || x == a) continue;
        if (D(a, x) < best) {
          best = D(a, x);
          b = x;
        }
      }
      if (b == prev) break;
      chain.push_back(b);
    }
    chain.pop_back();
    chain.pop_back();

    const std::size_t keep = std::min(a, b);
    const std::size_t drop = std::max(a, b);
    const double d_ab = D(a, b);
    merges.push_back({keep, drop, d_ab});
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double v = lance_williams(linkage, D(k, keep), D(k, drop), d_ab, size[keep], size[drop], size[k]);
      D(k, keep) = v;
      D(keep, k) = v;
    }
    size[keep] += size[drop];
    active[drop] = 0;
    --remaining;
  }
  return merges;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

Partition agglomerative(const DataMatrix& d, int c, Linkage linkage) {
  const std::size_t n = d.rows();
  const std::size_t dim = d.cols();
  if (c < 1 || static_cast<std::size_t>(c) > n) {
    throw PartitionError("agglomerative: cluster count " + std::to_string(c) + " outside [1, " + std::to_string(n) +
                         "]");
  }
  const auto order = canonical_row_order(d);
  std::vector<double> pts;
  pts.reserve(n * dim);
  for (auto i : order) {
    const auto r = d.row(i);
    pts.insert(pts.end(), r.begin(), r.end());
  }

  // Ward's recurrence runs on squared distances; the others on plain Euclidean distances.
  std::vector<double> dist(n * n);
  kernels::pairwise_squared_distances(pts, dim, dist);
  if (linkage != Linkage::Ward) {
    for (auto& v : dist) v = std::sqrt(v);
  }

  auto merges = n > 1 ? nn_chain(std::move(dist), n, linkage) : std::vector<Merge>{};
  std::stable_sort(merges.begin(), merges.end(), [](const Merge& x, const Merge& y) { return x.height < y.height; });

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const std::size_t to_apply = n - static_cast<std::size_t>(c);
  for (std::size_t m = 0; m < to_apply; ++m) {
    const auto ra = find_root(parent, merges[m].a);
    const auto rb = find_root(parent, merges[m].b);
    parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::vector<int> root_label(n, -1);
  int next = 0;
  std::vector<int> raw(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto r = find_root(parent, k);
    if (root_label[r] < 0) root_label[r] = next++;
    raw[order[k]] = root_label[r];
  }
  return Partition::from_labels(std::move(raw), c);
}

}  // namespace threeec
