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

// Fractions u / v over Z_q with an encrypted numerator and a public
// denominator. Nothing here ever reduces a fraction: denominators grow exactly
// as the operations dictate, which is what the overflow bookkeeping relies on.

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "csurf/fhe/evaluator.hpp"

namespace csurf::rational {

struct PlainRational {
  std::int64_t numerator = 0;
  std::uint64_t denominator = 1;

  double to_double() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const PlainRational&, const PlainRational&) = default;
};

std::string to_string(const PlainRational& r);

// Checked arithmetic on plain fractions, same blind rules as the encrypted
// side. Throws Errc::numerator_overflow / denominator_overflow on int64/uint64
// overflow.
PlainRational add(const PlainRational& a, const PlainRational& b);
PlainRational sub(const PlainRational& a, const PlainRational& b);
PlainRational mul(const PlainRational& a, const PlainRational& b);

struct RationalParams {
  std::uint64_t base_denominator = 10000;  // V

  double delta() const noexcept { return 1.0 / (2.0 * static_cast<double>(base_denominator)); }
  // V >= 1 and 100 * V^2 < q/2.
  void validate(std::uint64_t q) const;
};

// round(value * V), half away from zero.
std::int64_t quantize(double value, std::uint64_t base_denominator);

class EncryptedRational {
 public:
  EncryptedRational(fhe::Ciphertext numerator, std::uint64_t denominator);

  const fhe::Ciphertext& numerator() const noexcept { return numerator_; }
  std::uint64_t denominator() const noexcept { return denominator_; }

  // Public bound on |numerator|; >= q/2 means the value may have wrapped.
  bool numerator_may_wrap() const noexcept { return numerator_.may_wrap(); }

  EncryptedRational with_numerator(fhe::Ciphertext numerator) const {
    return EncryptedRational(std::move(numerator), denominator_);
  }

 private:
  fhe::Ciphertext numerator_;
  std::uint64_t denominator_;
};

EncryptedRational from_int(fhe::Ciphertext ct);

// u = ua*vb + ub*va, v = va*vb (denominators enter through scalar_mul).
EncryptedRational add(const EncryptedRational& a, const EncryptedRational& b);
EncryptedRational sub(const EncryptedRational& a, const EncryptedRational& b);
// u = ua*ub, v = va*vb
EncryptedRational mul(const EncryptedRational& a, const EncryptedRational& b);
// u = ua*c.num, v = va*c.den
EncryptedRational const_mul(const EncryptedRational& a, const PlainRational& c);

struct WeightedTerm {
  std::int64_t weight;
  const EncryptedRational* value;  // denominator must be 1
};

// (1/V) * sum(weight_i * u_i): a single denominator for the whole sum.
EncryptedRational weighted_sum_common_denominator(std::span<const WeightedTerm> terms,
                                                  std::uint64_t base_denominator);

PlainRational decrypt_rational(const fhe::SecretKey& sk, const EncryptedRational& a);
inline double to_float(const PlainRational& r) noexcept { return r.to_double(); }

// Ciphertext block followed by v as a 64-bit little-endian word.
void write_encrypted_rational(std::ostream& out, const EncryptedRational& a);
EncryptedRational read_encrypted_rational(std::istream& in);

}  // namespace csurf::rational
