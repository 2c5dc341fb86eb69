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

#pragma once

// Inner loops of the GSW backend. All arithmetic wraps modulo 2^64; callers
// reduce into [0, q) with a power-of-two mask afterwards.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant compiled with a function-level target attribute. The public entry
// points dispatch at runtime on the detected (or forced) instruction set.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace csurf::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

bool isa_supported(Isa isa) noexcept;

// Best supported ISA unless a forced one is set.
Isa active_isa() noexcept;

// Pins dispatch to `isa` (tests, benchmarking). Throws if unsupported.
void force_isa(Isa isa);
void clear_forced_isa() noexcept;

// out[0..width) += sum of matrix rows k, for every k < count whose bit is set
// in `bits` (bit k lives in bits[k / 64], position k % 64). Rows are `stride`
// words apart; width <= stride.
void masked_row_sum(std::span<const std::uint64_t> bits, std::size_t count,
                    const std::uint64_t* matrix, std::size_t stride, std::size_t width,
                    std::uint64_t* out);

// y[i] = (a * x[i] + y[i]) & mask
void ring_axpy(std::uint64_t a, std::span<const std::uint64_t> x, std::span<std::uint64_t> y,
               std::uint64_t mask);

namespace scalar {
void masked_row_sum(std::span<const std::uint64_t> bits, std::size_t count,
                    const std::uint64_t* matrix, std::size_t stride, std::size_t width,
                    std::uint64_t* out);
void ring_axpy(std::uint64_t a, std::span<const std::uint64_t> x, std::span<std::uint64_t> y,
               std::uint64_t mask);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CSURF_HAVE_AVX2_KERNELS 1
namespace avx2 {
void masked_row_sum(std::span<const std::uint64_t> bits, std::size_t count,
                    const std::uint64_t* matrix, std::size_t stride, std::size_t width,
                    std::uint64_t* out);
void ring_axpy(std::uint64_t a, std::span<const std::uint64_t> x, std::span<std::uint64_t> y,
               std::uint64_t mask);
}  // namespace avx2
#endif

}  // namespace csurf::kernels
