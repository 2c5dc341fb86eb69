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

#include <bit>
#include <cstdint>
#include <limits>
#include <string_view>

namespace csurf::fhe {

enum class Backend : std::uint8_t { gsw = 0, mirror = 1 };

std::string_view to_string(Backend backend) noexcept;
Backend parse_backend(std::string_view name);

enum class SecurityLabel : std::uint8_t { toy = 0, custom = 1 };

struct FheParams {
  std::uint64_t q = std::uint64_t{1} << 56;  // 256^7
  std::uint64_t n = 10;                      // lattice dimension
  std::uint64_t sigma = 1;                   // error distribution is uniform on [-sigma, sigma]
  SecurityLabel label = SecurityLabel::toy;

  // Default parameters. Not secure; labelled as such.
  static FheParams toy() { return {}; }

  // ceil(log2 q)
  std::uint64_t ell() const noexcept {
    return q <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(q - 1));
  }
  std::uint64_t dimension() const noexcept { return (n + 1) * ell(); }  // N
  std::uint64_t half_q() const noexcept { return q / 2; }

  // Throws Errc::invalid_params. The gsw backend additionally needs q = 2^ell.
  void validate(Backend backend) const;

  // Ring-level compatibility: ciphertexts combine iff q and n agree.
  bool compatible(const FheParams& other) const noexcept { return q == other.q && n == other.n; }
};

// --- ring helpers -----------------------------------------------------------

inline bool in_message_range(std::int64_t m, std::uint64_t q) noexcept {
  // [-floor(q/2), ceil(q/2))
  const auto half = q / 2;
  if (m < 0) return static_cast<std::uint64_t>(-(m + 1)) < half;
  return static_cast<std::uint64_t>(m) < q - half;
}

inline std::uint64_t to_ring(std::int64_t m, std::uint64_t q) noexcept {
  if (m >= 0) return static_cast<std::uint64_t>(m) % q;
  const auto mag = static_cast<std::uint64_t>(-(m + 1)) + 1;
  const auto r = mag % q;
  return r == 0 ? 0 : q - r;
}

inline std::int64_t to_signed(std::uint64_t r, std::uint64_t q) noexcept {
  return r < q - q / 2 ? static_cast<std::int64_t>(r) : -static_cast<std::int64_t>(q - r);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) + b) % q);
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

inline std::uint64_t abs_u64(std::int64_t v) noexcept {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r;
  return __builtin_add_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

}  // namespace csurf::fhe
