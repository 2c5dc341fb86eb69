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

#include <cstdint>
#include <string>

namespace csurf::bounds {

using u128 = unsigned __int128;

std::string to_string(u128 v);

struct ErrorBound {
  double determinant = 0;
  double trace = 0;
};

// Quantization error bound for one point with responses (dxx, dyy, dxy):
//   det:   delta*B*m*n*(3|dxx| + 3|dyy| + 0.81*8*|dxy|)
//   trace: 2*delta*B*m*n
ErrorBound error_bound(double delta, std::uint64_t B, std::uint64_t m, std::uint64_t n, double dxx, double dyy,
                       double dxy);
// Same with |dxx|, |dyy| <= 3Bmn and |dxy| <= 4Bmn substituted.
ErrorBound worst_case_error_bound(double delta, std::uint64_t B, std::uint64_t m, std::uint64_t n);

// 100 * V^2
u128 denominator_bound(std::uint64_t V);
// 1296 * B^2 * m^2 * n^2; Errc::numerator_overflow beyond 128 bits.
u128 numerator_bound(std::uint64_t B, std::uint64_t m, std::uint64_t n);
// (3Bmn) * V * 2: the trace numerator never exceeds this.
u128 trace_numerator_bound(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n);
// Determinant numerator bound with the quantized Haar unit c = round(V/81)
// of the smallest filter carried through: 2196 * c^2 * B^2 * m^2 * n^2.
u128 quantized_numerator_bound(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n);

// X < q/2 evaluated exactly as 2X < q.
bool below_half(u128 x, std::uint64_t q) noexcept;

struct BoundReport {
  std::uint64_t q = 0, V = 0, B = 0, m = 0, n = 0;
  double delta = 0;
  double error_bound_det = 0, error_bound_trace = 0;  // worst case
  u128 denom_max = 0;
  u128 numer_max = 0;
  u128 trace_numer_max = 0;
  u128 quantized_numer_max = 0;
  double q_half = 0;
  bool denominator_ok = false;
  bool numerator_ok = false;
  bool trace_ok = false;  // derived check, not part of the verdict
  bool quantized_numerator_ok = false;  // derived check, not part of the verdict

  bool pass() const noexcept { return denominator_ok && numerator_ok; }
  std::string text() const;
  // One name=value per line.
  std::string key_values() const;
};

// Throws Errc::invalid_params for q < 4 or zero inputs.
BoundReport check_theorem(std::uint64_t q, std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n);

// Smallest 256^k (k >= 1) passing both checks; Errc::unsupported_modulus if
// none fits in 64 bits.
std::uint64_t suggest_modulus(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n);

}  // namespace csurf::bounds
