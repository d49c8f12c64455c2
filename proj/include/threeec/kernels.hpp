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

#include <cstddef>
#include <span>
#include <string_view>

// Distance kernels behind every partitioner and validity index.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on AArch64).
// The active variant is chosen once at startup from the CPU's capabilities
// and can be overridden with set_isa() or the THREEEC_ISA environment
// variable ("scalar", "avx2", "neon"). Variants agree to within rounding;
// results are bitwise reproducible for a fixed variant.

namespace threeec::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

/// Best variant this CPU supports.
Isa detected_isa() noexcept;
bool is_supported(Isa isa) noexcept;
/// Variant currently in use.
Isa active_isa() noexcept;
/// Throws std::invalid_argument if the variant is not supported on this CPU.
void set_isa(Isa isa);

/// Squared Euclidean distance between two equal-length vectors.
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// out[j] = ||query - rows[j]||^2 for every row of a row-major (out.size() x dim) block.
void squared_distances_to_rows(std::span<const double> query, std::span<const double> rows,
                               std::size_t dim, std::span<double> out) noexcept;

/// Full n x n matrix of squared distances (row-major, symmetric, zero diagonal).
void pairwise_squared_distances(std::span<const double> points, std::size_t dim,
                                std::span<double> out) noexcept;

/// For each point, index of the nearest centroid (ties go to the lower index) and its squared distance.
void nearest_centroids(std::span<const double> points, std::span<const double> centroids,
                       std::size_t dim, std::span<int> labels, std::span<double> best) noexcept;

/// Per-variant entry points, exposed so tests can compare variants directly.
struct KernelTable {
  double (*squared_distance)(const double* a, const double* b, std::size_t dim) noexcept;
  void (*squared_distances_to_rows)(const double* query, const double* rows, std::size_t count,
                                    std::size_t dim, double* out) noexcept;
};

/// Table for a given variant; nullptr if that variant was not compiled in.
const KernelTable* table_for(Isa isa) noexcept;

}  // namespace threeec::kernels
