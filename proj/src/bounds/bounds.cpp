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

#include "csurf/bounds/bounds.hpp"

#include <cmath>
#include <sstream>

#include "csurf/error.hpp"

namespace csurf::bounds {

namespace {

u128 checked(u128 a, u128 b) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::numerator_overflow, "bound exceeds 128 bits");
  return r;
}

void require_positive(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  if (V == 0 || B == 0 || m == 0 || n == 0) fail(Errc::invalid_params, "V, B, m and n must be positive");
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

}  // namespace

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

ErrorBound error_bound(double delta, std::uint64_t B, std::uint64_t m, std::uint64_t n, double dxx, double dyy,
                       double dxy) {
  const double scale = delta * static_cast<double>(B) * static_cast<double>(m) * static_cast<double>(n);
  return {scale * (3 * std::abs(dxx) + 3 * std::abs(dyy) + 0.81 * 8 * std::abs(dxy)), 2 * scale};
}

ErrorBound worst_case_error_bound(double delta, std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  const double bmn = static_cast<double>(B) * static_cast<double>(m) * static_cast<double>(n);
  return error_bound(delta, B, m, n, 3 * bmn, 3 * bmn, 4 * bmn);
}

u128 denominator_bound(std::uint64_t V) { return checked(checked(V, V), 100); }

u128 numerator_bound(std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  const u128 bmn = checked(checked(B, m), n);
  return checked(checked(bmn, bmn), 1296);
}

u128 trace_numerator_bound(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  return checked(checked(checked(checked(B, m), n), 6), V);
}

u128 quantized_numerator_bound(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  const std::uint64_t unit = (V + 40) / 81;
  const u128 cbmn = checked(checked(checked(B, m), n), unit);
  return checked(checked(cbmn, cbmn), 2196);
}

bool below_half(u128 x, std::uint64_t q) noexcept {
  if (x >> 126) return false;
  return 2 * x < q;
}

BoundReport check_theorem(std::uint64_t q, std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  if (q < 4) fail(Errc::invalid_params, "q must be at least 4");
  require_positive(V, B, m, n);
  BoundReport r;
  r.q = q;
  r.V = V;
  r.B = B;
  r.m = m;
  r.n = n;
  r.delta = 1.0 / (2.0 * static_cast<double>(V));
  const auto worst = worst_case_error_bound(r.delta, B, m, n);
  r.error_bound_det = worst.determinant;
  r.error_bound_trace = worst.trace;
  r.denom_max = denominator_bound(V);
  r.numer_max = numerator_bound(B, m, n);
  r.trace_numer_max = trace_numerator_bound(V, B, m, n);
  r.q_half = static_cast<double>(q) / 2.0;
  r.denominator_ok = below_half(r.denom_max, q);
  r.numerator_ok = below_half(r.numer_max, q);
  r.trace_ok = below_half(r.trace_numer_max, q);
  r.quantized_numer_max = quantized_numerator_bound(V, B, m, n);
  r.quantized_numerator_ok = below_half(r.quantized_numer_max, q);
  return r;
}

std::uint64_t suggest_modulus(std::uint64_t V, std::uint64_t B, std::uint64_t m, std::uint64_t n) {
  require_positive(V, B, m, n);
  for (int k = 1; k < 8; ++k) {
    const std::uint64_t q = std::uint64_t{1} << (8 * k);
    if (check_theorem(q, V, B, m, n).pass()) return q;
  }
  fail(Errc::unsupported_modulus, "no power of 256 below 2^64 satisfies both bounds (V=" + std::to_string(V) +
                                      ", B=" + std::to_string(B) + ", m=" + std::to_string(m) +
                                      ", n=" + std::to_string(n) + ")");
}

std::string BoundReport::text() const {
  std::ostringstream s;
  s << "modulus q = " << q << " (q/2 = " << fmt(q_half) << ")\n"
    << "V = " << V << ", B = " << B << ", image " << m << "x" << n << ", delta = " << fmt(delta) << "\n"
    << "denominator bound 100*V^2 = " << to_string(denom_max) << "  " << (denominator_ok ? "< q/2 ok" : ">= q/2 FAIL")
    << "\n"
    << "numerator bound 1296*B^2*m^2*n^2 = " << to_string(numer_max) << "  "
    << (numerator_ok ? "< q/2 ok" : ">= q/2 FAIL") << "\n"
    << "trace numerator bound 6*B*m*n*V = " << to_string(trace_numer_max) << "  "
    << (trace_ok ? "< q/2 ok" : ">= q/2 FAIL") << "\n"
    << "quantized numerator bound 2196*c^2*B^2*m^2*n^2 = " << to_string(quantized_numer_max) << "  "
    << (quantized_numerator_ok ? "< q/2 ok" : ">= q/2 (advisory)") << "\n"
    << "worst-case error: determinant " << fmt(error_bound_det) << ", trace " << fmt(error_bound_trace) << "\n"
    << "verdict: " << (pass() ? "PASS" : "FAIL") << "\n";
  return s.str();
}

std::string BoundReport::key_values() const {
  std::ostringstream s;
  s << "q=" << q << "\nV=" << V << "\nB=" << B << "\nm=" << m << "\nn=" << n << "\ndelta=" << fmt(delta)
    << "\nq_half=" << fmt(q_half) << "\ndenom_max=" << to_string(denom_max)
    << "\nnumer_max=" << to_string(numer_max) << "\ntrace_numer_max=" << to_string(trace_numer_max)
    << "\nerror_bound_det=" << fmt(error_bound_det) << "\nerror_bound_trace=" << fmt(error_bound_trace)
    << "\ndenominator_ok=" << (denominator_ok ? 1 : 0) << "\nnumerator_ok=" << (numerator_ok ? 1 : 0)
    << "\nquantized_numer_max=" << to_string(quantized_numer_max) << "\ntrace_ok=" << (trace_ok ? 1 : 0)
    << "\nquantized_numerator_ok=" << (quantized_numerator_ok ? 1 : 0) << "\ntheorem_pass=" << (pass() ? 1 : 0) << "\n";
  return s.str();
}

}  // namespace csurf::bounds
