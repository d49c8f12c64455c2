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

#include "kernels_impl.hpp"

namespace threeec::kernels::detail {
namespace {

double sqdist(const double* a, const double* b, std::size_t dim) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

void sqdist_rows(const double* query, const double* rows, std::size_t count, std::size_t dim,
                 double* out) noexcept {
  for (std::size_t j = 0; j < count; ++j) out[j] = sqdist(query, rows + j * dim, dim);
}

constexpr KernelTable kScalar{&sqdist, &sqdist_rows};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace threeec::kernels::detail
