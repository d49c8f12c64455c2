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

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define THREEEC_HAVE_NEON_KERNELS 1
#endif

namespace threeec::kernels::detail {

#ifdef THREEEC_HAVE_NEON_KERNELS
namespace {

double sqdist(const double* a, const double* b, std::size_t dim) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 4 <= dim; k += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
    const float64x2_t d1 = vsubq_f64(vld1q_f64(a + k + 2), vld1q_f64(b + k + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  for (; k + 2 <= dim; k += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + k), vld1q_f64(b + k));
    acc0 = vfmaq_f64(acc0, d, d);
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; k < dim; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

void sqdist_rows(const double* query, const double* rows, std::size_t count, std::size_t dim,
                 double* out) noexcept {
  for (std::size_t j = 0; j < count; ++j) out[j] = sqdist(query, rows + j * dim, dim);
}

constexpr KernelTable kNeon{&sqdist, &sqdist_rows};

}  // namespace

const KernelTable* neon_table() noexcept { return &kNeon; }
#else
const KernelTable* neon_table() noexcept { return nullptr; }
#endif

}  // namespace threeec::kernels::detail
