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

// Test-only helpers: data generators and independent reference oracles.
// Nothing here calls into the library's numeric code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "threeec/data_matrix.hpp"

namespace threeec::testing {

inline std::filesystem::path source_dir() { return THREEEC_SOURCE_DIR; }
inline std::filesystem::path iris_path() { return source_dir() / "data" / "iris.csv"; }

using Points = std::vector<std::vector<double>>;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : e_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(e_() >> 11) * 0x1.0p-53); }
  int integer(int lo, int hi) { return lo + static_cast<int>(e_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    // Box-Muller on the raw stream.
    const double u1 = std::max(uniform(0.0, 1.0), 1e-300);
    const double u2 = uniform(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 e_;
};

inline Points random_points(Gen& g, int n, int p, double lo = -5.0, double hi = 5.0) {
  Points pts(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(p)));
  for (auto& r : pts) {
    for (auto& v : r) v = g.uniform(lo, hi);
  }
  return pts;
}

/// Two blobs of `per` points with uniform jitter in [-1, 1] around (0,0) and (100,100).
inline Points two_blobs(Gen& g, int per, double jitter = 1.0, double offset = 100.0) {
  Points pts;
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < per; ++i) {
      pts.push_back({b * offset + g.uniform(-jitter, jitter), b * offset + g.uniform(-jitter, jitter)});
    }
  }
  return pts;
}

/// Labels guaranteed to use every cluster in [0, c).
inline std::vector<int> random_labels(Gen& g, int n, int c) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i < c ? i : g.integer(0, c - 1);
  for (int i = n - 1; i > 0; --i) std::swap(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(g.integer(0, i))]);
  return labels;
}

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

// ---- Definitional index oracles ------------------------------------------

inline double oracle_silhouette(const Points& x, const std::vector<int>& labels, int c) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(static_cast<std::size_t>(c), 0.0);
    std::vector<int> cnt(static_cast<std::size_t>(c), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[static_cast<std::size_t>(labels[j])] += euclid(x[i], x[j]);
      cnt[static_cast<std::size_t>(labels[j])] += 1;
    }
    const auto own = static_cast<std::size_t>(labels[i]);
    if (cnt[own] == 0) continue;  // singleton
    const double a = sum[own] / cnt[own];
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < static_cast<std::size_t>(c); ++k) {
      if (k != own && cnt[k] > 0) b = std::min(b, sum[k] / cnt[k]);
    }
    total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

/// Calinski-Harabasz via pairwise distances: W_k = sum_{i<j in k} d^2 / n_k, T = sum_{i<j} d^2 / n, B = T - W.
inline double oracle_calinski_harabasz(const Points& x, const std::vector<int>& labels, int c) {
  const std::size_t n = x.size();
  std::vector<double> pair_sum(static_cast<std::size_t>(c), 0.0);
  std::vector<int> cnt(static_cast<std::size_t>(c), 0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cnt[static_cast<std::size_t>(labels[i])] += 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = euclid(x[i], x[j]);
      total += d * d;
      if (labels[i] == labels[j]) pair_sum[static_cast<std::size_t>(labels[i])] += d * d;
    }
  }
  double within = 0.0;
  for (int k = 0; k < c; ++k) within += pair_sum[static_cast<std::size_t>(k)] / cnt[static_cast<std::size_t>(k)];
  const double between = total / static_cast<double>(n) - within;
  return (between / (c - 1)) / (within / (static_cast<double>(n) - c));
}

inline double oracle_davies_bouldin(const Points& x, const std::vector<int>& labels, int c) {
  const std::size_t p = x.front().size();
  Points cent(static_cast<std::size_t>(c), std::vector<double>(p, 0.0));
  std::vector<int> cnt(static_cast<std::size_t>(c), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    cnt[static_cast<std::size_t>(labels[i])] += 1;
    for (std::size_t k = 0; k < p; ++k) cent[static_cast<std::size_t>(labels[i])][k] += x[i][k];
  }
  for (int j = 0; j < c; ++j) {
    for (auto& v : cent[static_cast<std::size_t>(j)]) v /= cnt[static_cast<std::size_t>(j)];
  }
  std::vector<double> s(static_cast<std::size_t>(c), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[static_cast<std::size_t>(labels[i])] += euclid(x[i], cent[static_cast<std::size_t>(labels[i])]);
  }
  for (int j = 0; j < c; ++j) s[static_cast<std::size_t>(j)] /= cnt[static_cast<std::size_t>(j)];
  double total = 0.0;
  for (int i = 0; i < c; ++i) {
    double worst = 0.0;
    for (int j = 0; j < c; ++j) {
      if (i == j) continue;
      worst = std::max(worst, (s[static_cast<std::size_t>(i)] + s[static_cast<std::size_t>(j)]) /
                                  euclid(cent[static_cast<std::size_t>(i)], cent[static_cast<std::size_t>(j)]));
    }
    total += worst;
  }
  return total / c;
}

// ---- Exhaustive 2-partition oracle ---------------------------------------

/// Minimum within-cluster SSE 2-partition by enumerating every 2-coloring (point 0 fixed to cluster 0).
inline std::vector<int> brute_force_best_split(const Points& x) {
  const std::size_t n = x.size();
  const std::size_t p = x.front().size();
  double sq_total = 0.0;
  std::vector<double> all(p, 0.0);
  for (const auto& r : x) {
    for (std::size_t k = 0; k < p; ++k) {
      sq_total += r[k] * r[k];
      all[k] += r[k];
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0;
  const std::uint64_t limit = std::uint64_t{1} << (n - 1);
  std::vector<double> sum1(p);
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    // Bit i-1 set means point i is in cluster 1.
    std::fill(sum1.begin(), sum1.end(), 0.0);
    std::size_t n1 = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (mask >> (i - 1) & 1u) {
        ++n1;
        for (std::size_t k = 0; k < p; ++k) sum1[k] += x[i][k];
      }
    }
    const std::size_t n0 = n - n1;
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      const double a = all[k] - sum1[k];
      s0 += a * a;
      s1 += sum1[k] * sum1[k];
    }
    const double sse = sq_total - s0 / static_cast<double>(n0) - s1 / static_cast<double>(n1);
    if (sse < best) {
      best = sse;
      best_mask = mask;
    }
  }
  std::vector<int> labels(n, 0);
  for (std::size_t i = 1; i < n; ++i) labels[i] = (best_mask >> (i - 1) & 1u) ? 1 : 0;
  return labels;
}

/// True when two label vectors describe the same grouping, regardless of label ids.
inline bool same_grouping(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace threeec::testing
