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

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define THREEEC_HAVE_AVX2_KERNELS 1
#endif

namespace threeec::kernels::detail {

#ifdef THREEEC_HAVE_AVX2_KERNELS
namespace {

__attribute__((target("avx2,fma"))) inline double hsum(__m256d v) noexcept {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

__attribute__((target("avx2,fma"))) double sqdist(const double* a, const double* b,
                                                  std::size_t dim) noexcept {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= dim; k += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; k + 4 <= dim; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    acc0 = _mm256_fmadd_pd(d, d, acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < dim; ++k) {
    const double d = a[k] - b[k];
    acc = __builtin_fma(d, d, acc);
  }
  return acc;
}

// Narrow rows (dim < 4) gain nothing from per-row vectors, so four rows are
// handled per step with one lane per row instead.
__attribute__((target("avx2,fma"))) void sqdist_rows(const double* query, const double* rows,
                                                     std::size_t count, std::size_t dim,
                                                     double* out) noexcept {
  if (dim >= 4) {
    for (std::size_t j = 0; j < count; ++j) out[j] = sqdist(query, rows + j * dim, dim);
    return;
  }
  std::size_t j = 0;
  const __m256i stride = _mm256_set_epi64x(3 * static_cast<long long>(dim), 2 * static_cast<long long>(dim),
                                           static_cast<long long>(dim), 0);
  for (; j + 4 <= count; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    const double* base = rows + j * dim;
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d x = _mm256_i64gather_pd(base + k, stride, 8);
      const __m256d d = _mm256_sub_pd(x, _mm256_set1_pd(query[k]));
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = rows[j * dim + k] - query[k];
      acc = __builtin_fma(d, d, acc);
    }
    out[j] = acc;
  }
}

constexpr KernelTable kAvx2{&sqdist, &sqdist_rows};

}  // namespace

const KernelTable* avx2_table() noexcept { return &kAvx2; }
#else
const KernelTable* avx2_table() noexcept { return nullptr; }
#endif

}  // namespace threeec::kernels::detail
