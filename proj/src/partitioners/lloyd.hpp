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
#include <cstdint>
#include <span>
#include <vector>

#include "threeec/partitioners.hpp"

namespace threeec::detail {

struct LloydResult {
  std::vector<int> labels;  // raw, not canonicalized
  std::vector<double> centroids;
  double sse = 0.0;
  std::vector<double> sse_trace;
  int iterations = 0;
  bool converged = false;
};

// Multi-restart Lloyd on a row-major n x dim block; rows are used in the order given.
LloydResult lloyd(std::span<const double> points, std::size_t dim, int c, std::uint64_t seed,
                  const KMeansParams& params);

}  // namespace threeec::detail
