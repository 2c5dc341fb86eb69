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

#include <bit>

#include "csurf/kernels/ring_kernels.hpp"

namespace csurf::kernels::scalar {

void masked_row_sum(std::span<const std::uint64_t> bits, std::size_t count,
                    const std::uint64_t* matrix, std::size_t stride, std::size_t width,
                    std::uint64_t* out) {
  for (std::size_t w = 0; w * 64 < count; ++w) {
    std::uint64_t word = bits[w];
    if (count - w * 64 < 64) word &= (std::uint64_t{1} << (count - w * 64)) - 1;
    while (word != 0) {
      const std::size_t k = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
      word &= word - 1;
      const std::uint64_t* row = matrix + k * stride;
      for (std::size_t j = 0; j < width; ++j) out[j] += row[j];
    }
  }
}

void ring_axpy(std::uint64_t a, std::span<const std::uint64_t> x, std::span<std::uint64_t> y,
               std::uint64_t mask) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = (a * x[i] + y[i]) & mask;
}

}  // namespace csurf::kernels::scalar
