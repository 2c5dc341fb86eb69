/*
 * Copyright (c) 2026 The csurf Authors
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
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "csurf/kernels/ring_kernels.hpp"

#ifdef CSURF_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <bit>

#define CSURF_AVX2 __attribute__((target("avx2")))

namespace csurf::kernels::avx2 {

namespace {

// Clears bits at positions >= count in the last word.
inline std::uint64_t live_bits(std::span<const std::uint64_t> bits, std::size_t w,
                               std::size_t count) {
  std::uint64_t word = bits[w];
  if (count - w * 64 < 64) word &= (std::uint64_t{1} << (count - w * 64)) - 1;
  return word;
}

// Accumulates up to four 4-lane column groups held in registers.
template <int Groups>
CSURF_AVX2 void accumulate_block(std::span<const std::uint64_t> bits, std::size_t count,
                                 const std::uint64_t* matrix, std::size_t stride,
                                 std::uint64_t* out) {
  __m256i acc[Groups];
  for (int g = 0; g < Groups; ++g)
    acc[g] = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(out + 4 * g));
  for (std::size_t w = 0; w * 64 < count; ++w) {
    std::uint64_t word = live_bits(bits, w, count);
    while (word != 0) {
      const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      word &= word - 1;
      const std::uint64_t* row = matrix + k * stride;
      for (int g = 0; g < Groups; ++g) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + 4 * g));
        acc[g] = _mm256_add_epi64(acc[g], v);
      }
    }
  }
  for (int g = 0; g < Groups; ++g)
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + 4 * g), acc[g]);
}

CSURF_AVX2 inline __m256i mullo_epi64(__m256i x, __m256i a_lo, __m256i a_hi) {
  const __m256i lo = _mm256_mul_epu32(x, a_lo);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(x, 32), a_lo),
                                         _mm256_mul_epu32(x, a_hi));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

}  // namespace

CSURF_AVX2 void masked_row_sum(std::span<const std::uint64_t> bits, std::size_t count,
                               const std::uint64_t* matrix, std::size_t stride,
                               std::size_t width, std::uint64_t* out) {
  std::size_t j = 0;
  for (; j + 16 <= width; j += 16) accumulate_block<4>(bits, count, matrix + j, stride, out + j);
  switch ((width - j) / 4) {
    case 3: accumulate_block<3>(bits, count, matrix + j, stride, out + j); j += 12; break;
    case 2: accumulate_block<2>(bits, count, matrix + j, stride, out + j); j += 8; break;
    case 1: accumulate_block<1>(bits, count, matrix + j, stride, out + j); j += 4; break;
    default: break;
  }
  if (j < width) scalar::masked_row_sum(bits, count, matrix + j, stride, width - j, out + j);
}

CSURF_AVX2 void ring_axpy(std::uint64_t a, std::span<const std::uint64_t> x,
                          std::span<std::uint64_t> y, std::uint64_t mask) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  const __m256i a_lo = _mm256_set1_epi64x(static_cast<long long>(a & 0xffffffffu));
  const __m256i a_hi = _mm256_set1_epi64x(static_cast<long long>(a >> 32));
  const __m256i m = _mm256_set1_epi64x(static_cast<long long>(mask));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i xv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x.data() + i));
    const __m256i yv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y.data() + i));
    const __m256i r = _mm256_and_si256(_mm256_add_epi64(mullo_epi64(xv, a_lo, a_hi), yv), m);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(y.data() + i), r);
  }
  for (; i < n; ++i) y[i] = (a * x[i] + y[i]) & mask;
}

}  // namespace csurf::kernels::avx2

#endif
