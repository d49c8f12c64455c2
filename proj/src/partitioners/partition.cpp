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
#include <numeric>

#include "threeec/errors.hpp"
#include "threeec/partitioners.hpp"

namespace threeec {

std::string_view to_string(PartitionerKind kind) noexcept {
  switch (kind) {
    case PartitionerKind::KMeans: return "kmeans";
    case PartitionerKind::Agglomerative: return "agglomerative";
    case PartitionerKind::Spectral: return "spectral";
  }
  return "unknown";
}

std::string_view to_string(Linkage linkage) noexcept {
  switch (linkage) {
    case Linkage::Ward: return "ward";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
  }
  return "unknown";
}

PartitionerKind PartitionerSpec::kind() const noexcept {
  return static_cast<PartitionerKind>(params.index());
}

namespace {

void check_kmeans(const std::string& who, const KMeansParams& p) {
  if (p.restarts < 1) throw ConfigError(who + ": restarts must be >= 1");
  if (p.max_iterations < 1) throw ConfigError(who + ": max_iterations must be >= 1");
  if (!(p.tolerance > 0.0)) throw ConfigError(who + ": tolerance must be > 0");
}

}  // namespace

void PartitionerSpec::validate() const {
  const std::string who = "algorithm '" + name + "'";
  if (name.empty()) throw ConfigError("algorithm name must not be empty");
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KMeansParams>) {
          check_kmeans(who, p);
        } else if constexpr (std::is_same_v<T, SpectralParams>) {
          if (p.neighbors < 1) throw ConfigError(who + ": neighbors must be >= 1");
          if (!(p.eigen_tolerance > 0.0)) throw ConfigError(who + ": eigen_tolerance must be > 0");
          check_kmeans(who, p.embedding);
        }
      },
      params);
}

PartitionerSpec PartitionerSpec::kmeans(std::string name, KMeansParams p) { return {std::move(name), p}; }
PartitionerSpec PartitionerSpec::agglomerative(std::string name, AgglomerativeParams p) {
  return {std::move(name), p};
}
PartitionerSpec PartitionerSpec::spectral(std::string name, SpectralParams p) { return {std::move(name), p}; }

std::vector<std::size_t> canonical_row_order(const DataMatrix& d) {
  std::vector<std::size_t> order(d.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = d.row(a);
    const auto rb = d.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  return order;
}

Partition partition(const PartitionerSpec& spec, const DataMatrix& d, int c, std::uint64_t seed) {
  const auto n = d.rows();
  if (c < 2) throw PartitionError("cluster count must be >= 2, got " + std::to_string(c));
  if (static_cast<std::size_t>(c) > n) {
    throw PartitionError("cluster count " + std::to_string(c) + " exceeds the " + std::to_string(n) + " rows");
  }
  if (static_cast<std::size_t>(c) == n) {
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return Partition::from_labels(std::move(labels), c);
  }
  return std::visit(
      [&](const auto& p) -> Partition {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KMeansParams>) {
          return kmeans(d, c, seed, p).partition;
        } else if constexpr (std::is_same_v<T, AgglomerativeParams>) {
          return agglomerative(d, c, p.linkage);
        } else {
          return spectral(d, c, seed, p);
        }
      },
      spec.params);
}

}  // namespace threeec
