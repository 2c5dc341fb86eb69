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

#include <atomic>

#include "csurf/error.hpp"
#include "csurf/kernels/ring_kernels.hpp"

namespace csurf::kernels {

namespace {

// -1: no override
std::atomic<int> g_forced{-1};

Isa detect() noexcept {
#ifdef CSURF_HAVE_AVX2_KERNELS
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) noexcept {
  if (isa == Isa::scalar) return true;
#ifdef CSURF_HAVE_AVX2_KERNELS
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() noexcept {
  static const Isa detected = detect();
  const int forced = g_forced.load(std::memory_order_relaxed);
  return forced < 0 ? detected : static_cast<Isa>(forced);
}

void force_isa(Isa isa) {
  if (!isa_supported(isa))
    fail(Errc::invalid_argument, "instruction set not supported: " + std::string(to_string(isa)));
  g_forced.store(static_cast<int>(isa), std::memory_order_relaxed);
}

void clear_forced_isa() noexcept { g_forced.store(-1, std::memory_order_relaxed); }

void masked_row_sum(std::span<const std::uint64_t> bits, std::size_t count,
                    const std::uint64_t* matrix, std::size_t stride, std::size_t width,
                    std::uint64_t* out) {
#ifdef CSURF_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::masked_row_sum(bits, count, matrix, stride, width, out);
#endif
  scalar::masked_row_sum(bits, count, matrix, stride, width, out);
}

void ring_axpy(std::uint64_t a, std::span<const std::uint64_t> x, std::span<std::uint64_t> y,
               std::uint64_t mask) {
#ifdef CSURF_HAVE_AVX2_KERNELS
  if (active_isa() == Isa::avx2) return avx2::ring_axpy(a, x, y, mask);
#endif
  scalar::ring_axpy(a, x, y, mask);
}

}  // namespace csurf::kernels
