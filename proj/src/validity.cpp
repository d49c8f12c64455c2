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

#include "threeec/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "threeec/errors.hpp"
#include "threeec/kernels.hpp"

namespace threeec {

std::string_view to_string(IndexKind kind) noexcept {
  switch (kind) {
    case IndexKind::Silhouette: return "silhouette";
    case IndexKind::CalinskiHarabasz: return "calinski_harabasz";
    case IndexKind::DaviesBouldin: return "davies_bouldin";
  }
  return "unknown";
}

std::string_view to_string(Direction direction) noexcept {
  return direction == Direction::HigherBetter ? "higher_better" : "lower_better";
}

Direction direction_of(IndexKind kind) noexcept {
  return kind == IndexKind::DaviesBouldin ? Direction::LowerBetter : Direction::HigherBetter;
}

bool is_breach(const IndexSpec& spec, double value) noexcept {
  if (std::isnan(value)) return true;
  return spec.direction() == Direction::HigherBetter ? value < spec.lambda : value > spec.lambda;
}

Score score(const IndexSpec& spec, double value) noexcept { return {value, is_breach(spec, value)}; }

PairwiseDistances::PairwiseDistances(const DataMatrix& d) : n_(d.rows()), dist_(n_ * n_) {
  kernels::pairwise_squared_distances(d.values(), d.cols(), dist_);
  for (auto& v : dist_) v = std::sqrt(v);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shape(const DataMatrix& d, const Partition& p, std::string_view who) {
  if (p.labels.size() != d.rows()) {
    throw IndexError(std::string(who) + ": partition has " + std::to_string(p.labels.size()) + " labels for " +
                     std::to_string(d.rows()) + " rows");
  }
  if (p.clusters < 2) throw IndexError(std::string(who) + ": needs at least 2 clusters");
  if (p.has_empty_cluster()) throw IndexError(std::string(who) + ": partition has an empty cluster");
}

// c x p centroid block plus the global mean.
std::vector<double> centroids(const DataMatrix& d, const Partition& p) {
  const std::size_t dim = d.cols();
  std::vector<double> out(static_cast<std::size_t>(p.clusters) * dim, 0.0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const auto r = d.row(i);
    double* c = out.data() + static_cast<std::size_t>(p.labels[i]) * dim;
    for (std::size_t k = 0; k < dim; ++k) c[k] += r[k];
  }
  for (int j = 0; j < p.clusters; ++j) {
    const double inv = 1.0 / static_cast<double>(p.cluster_sizes[static_cast<std::size_t>(j)]);
    for (std::size_t k = 0; k < dim; ++k) out[static_cast<std::size_t>(j) * dim + k] *= inv;
  }
  return out;
}

}  // namespace

double silhouette(const DataMatrix& d, const Partition& p) { return silhouette(d, p, PairwiseDistances(d)); }

double silhouette(const DataMatrix& d, const Partition& p, const PairwiseDistances& dist) {
  require_shape(d, p, "silhouette");
  const std::size_t n = d.rows();
  const auto c = static_cast<std::size_t>(p.clusters);
  std::vector<double> sums(c);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) sums[static_cast<std::size_t>(p.labels[j])] += dist(i, j);
    const auto own = static_cast<std::size_t>(p.labels[i]);
    if (p.cluster_sizes[own] < 2) continue;
    const double a = sums[own] / static_cast<double>(p.cluster_sizes[own] - 1);
    double b = kInf;
    for (std::size_t k = 0; k < c; ++k) {
      if (k == own) continue;
      b = std::min(b, sums[k] / static_cast<double>(p.cluster_sizes[k]));
    }
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

double calinski_harabasz(const DataMatrix& d, const Partition& p) {
  require_shape(d, p, "calinski_harabasz");
  const std::size_t n = d.rows();
  const std::size_t dim = d.cols();
  if (static_cast<std::size_t>(p.clusters) > n - 1) {
    throw IndexError("calinski_harabasz: needs c <= n - 1, got c = " + std::to_string(p.clusters));
  }
  const auto cents = centroids(d, p);
  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) mean[k] += d.at(i, k);
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  double within = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    within += kernels::squared_distance(d.row(i), std::span<const double>(cents).subspan(
                                                      static_cast<std::size_t>(p.labels[i]) * dim, dim));
  }
  double between = 0.0;
  for (int j = 0; j < p.clusters; ++j) {
    between += static_cast<double>(p.cluster_sizes[static_cast<std::size_t>(j)]) *
               kernels::squared_distance(std::span<const double>(cents).subspan(static_cast<std::size_t>(j) * dim, dim),
                                         mean);
  }
  if (within == 0.0) return kInf;
  return (between / static_cast<double>(p.clusters - 1)) / (within / static_cast<double>(n - static_cast<std::size_t>(p.clusters)));
}

double davies_bouldin(const DataMatrix& d, const Partition& p) {
  require_shape(d, p, "davies_bouldin");
  const std::size_t n = d.rows();
  const std::size_t dim = d.cols();
  const auto c = static_cast<std::size_t>(p.clusters);
  const auto cents = centroids(d, p);
  const std::span<const double> cs(cents);

  std::vector<double> scatter(c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto l = static_cast<std::size_t>(p.labels[i]);
    scatter[l] += std::sqrt(kernels::squared_distance(d.row(i), cs.subspan(l * dim, dim)));
  }
  for (std::size_t j = 0; j < c; ++j) scatter[j] /= static_cast<double>(p.cluster_sizes[j]);

  double total = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      if (i == j) continue;
      const double m = std::sqrt(kernels::squared_distance(cs.subspan(i * dim, dim), cs.subspan(j * dim, dim)));
      if (m == 0.0) return kInf;
      worst = std::max(worst, (scatter[i] + scatter[j]) / m);
    }
    total += worst;
  }
  return total / static_cast<double>(c);
}

double evaluate(IndexKind kind, const DataMatrix& d, const Partition& p, const PairwiseDistances* dist) {
  switch (kind) {
    case IndexKind::Silhouette: return dist ? silhouette(d, p, *dist) : silhouette(d, p);
    case IndexKind::CalinskiHarabasz: return calinski_harabasz(d, p);
    case IndexKind::DaviesBouldin: return davies_bouldin(d, p);
  }
  throw IndexError("unknown index kind");
}

}  // namespace threeec
