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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace threeec::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &detail::scalar_table();
    case Isa::Avx2: return detail::avx2_table();
    case Isa::Neon: return detail::neon_table();
  }
  return nullptr;
}

bool is_supported(Isa isa) noexcept {
  if (table_for(isa) == nullptr) return false;
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2) return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#endif
  return true;
}

Isa detected_isa() noexcept {
  if (is_supported(Isa::Avx2)) return Isa::Avx2;
  if (is_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

namespace {

Isa initial_isa() {
  if (const char* env = std::getenv("THREEEC_ISA")) {
    const std::string_view want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == to_string(isa) && is_supported(isa)) return isa;
    }
  }
  return detected_isa();
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

const KernelTable& active() noexcept { return *table_for(active_slot().load(std::memory_order_relaxed)); }

}  // namespace

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!is_supported(isa)) {
    throw std::invalid_argument("kernel variant '" + std::string(to_string(isa)) + "' is not supported here");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  return active().squared_distance(a.data(), b.data(), a.size());
}

void squared_distances_to_rows(std::span<const double> query, std::span<const double> rows,
                               std::size_t dim, std::span<double> out) noexcept {
  active().squared_distances_to_rows(query.data(), rows.data(), out.size(), dim, out.data());
}

void pairwise_squared_distances(std::span<const double> points, std::size_t dim,
                                std::span<double> out) noexcept {
  const std::size_t n = dim == 0 ? 0 : points.size() / dim;
  const auto& k = active();
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.data() + i * n;
    row[i] = 0.0;
    if (i + 1 < n) {
      k.squared_distances_to_rows(points.data() + i * dim, points.data() + (i + 1) * dim, n - i - 1, dim,
                                  row + i + 1);
    }
    for (std::size_t j = 0; j < i; ++j) row[j] = out[j * n + i];
  }
}

void nearest_centroids(std::span<const double> points, std::span<const double> centroids,
                       std::size_t dim, std::span<int> labels, std::span<double> best) noexcept {
  const std::size_t n = labels.size();
  const std::size_t c = centroids.size() / dim;
  const auto& k = active();
  // Small stack buffer covers the usual cluster counts; larger c falls back to per-centroid calls.
  constexpr std::size_t kBuf = 64;
  double buf[kBuf];
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = points.data() + i * dim;
    int arg = 0;
    double lo = 0.0;
    if (c <= kBuf) {
      k.squared_distances_to_rows(x, centroids.data(), c, dim, buf);
      lo = buf[0];
      for (std::size_t j = 1; j < c; ++j) {
        if (buf[j] < lo) {
          lo = buf[j];
          arg = static_cast<int>(j);
        }
      }
    } else {
      lo = k.squared_distance(x, centroids.data(), dim);
      for (std::size_t j = 1; j < c; ++j) {
        const double d = k.squared_distance(x, centroids.data() + j * dim, dim);
        if (d < lo) {
          lo = d;
          arg = static_cast<int>(j);
        }
      }
    }
    labels[i] = arg;
    best[i] = lo;
  }
}

}  // namespace threeec::kernels
