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

#include "csurf/rational/rational.hpp"

#include <cmath>

#include "csurf/error.hpp"
#include "csurf/fhe/serialize.hpp"
#include "csurf/io/binary.hpp"

namespace csurf::rational {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::numerator_overflow, "numerator overflow in plain rational");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(Errc::numerator_overflow, "numerator overflow in plain rational");
  return r;
}

std::int64_t as_signed_den(std::uint64_t v) {
  if (v > static_cast<std::uint64_t>(INT64_MAX)) fail(Errc::denominator_overflow, "denominator exceeds int64");
  return static_cast<std::int64_t>(v);
}

std::uint64_t plain_den_product(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::denominator_overflow, "denominator overflow in plain rational");
  return r;
}

// v must stay below q/2.
std::uint64_t encrypted_den_product(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  const unsigned __int128 v = static_cast<unsigned __int128>(a) * b;
  if (v >= q - q / 2)
    fail(Errc::denominator_overflow, "denominator " + std::to_string(static_cast<double>(v)) +
                                         " reaches q/2 for q=" + std::to_string(q));
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string to_string(const PlainRational& r) {
  return std::to_string(r.numerator) + "/" + std::to_string(r.denominator);
}

PlainRational add(const PlainRational& a, const PlainRational& b) {
  return {checked_add(checked_mul(a.numerator, as_signed_den(b.denominator)),
                      checked_mul(b.numerator, as_signed_den(a.denominator))),
          plain_den_product(a.denominator, b.denominator)};
}

PlainRational sub(const PlainRational& a, const PlainRational& b) {
  return add(a, PlainRational{checked_mul(b.numerator, -1), b.denominator});
}

PlainRational mul(const PlainRational& a, const PlainRational& b) {
  return {checked_mul(a.numerator, b.numerator), plain_den_product(a.denominator, b.denominator)};
}

void RationalParams::validate(std::uint64_t q) const {
  if (base_denominator == 0) fail(Errc::invalid_params, "base denominator V must be at least 1");
  const unsigned __int128 den = static_cast<unsigned __int128>(base_denominator) * base_denominator * 100;
  if (2 * den >= q)
    fail(Errc::bounds_violation, "100*V^2 must be below q/2 (V=" + std::to_string(base_denominator) +
                                     ", q=" + std::to_string(q) + ")");
}

std::int64_t quantize(double value, std::uint64_t base_denominator) {
  return static_cast<std::int64_t>(std::llround(value * static_cast<double>(base_denominator)));
}

EncryptedRational::EncryptedRational(fhe::Ciphertext numerator, std::uint64_t denominator)
    : numerator_(std::move(numerator)), denominator_(denominator) {
  if (denominator_ == 0) fail(Errc::invalid_argument, "rational denominator must be positive");
  const std::uint64_t q = numerator_.params().q;
  if (denominator_ >= q - q / 2) fail(Errc::denominator_overflow, "denominator must stay below q/2");
}

EncryptedRational from_int(fhe::Ciphertext ct) { return EncryptedRational(std::move(ct), 1); }

EncryptedRational add(const EncryptedRational& a, const EncryptedRational& b) {
  const std::uint64_t q = a.numerator().params().q;
  const std::uint64_t v = encrypted_den_product(a.denominator(), b.denominator(), q);
  auto u = fhe::hadd(fhe::scalar_mul(a.numerator(), static_cast<std::int64_t>(b.denominator())),
                     fhe::scalar_mul(b.numerator(), static_cast<std::int64_t>(a.denominator())));
  return EncryptedRational(std::move(u), v);
}

EncryptedRational sub(const EncryptedRational& a, const EncryptedRational& b) {
  const std::uint64_t q = a.numerator().params().q;
  const std::uint64_t v = encrypted_den_product(a.denominator(), b.denominator(), q);
  auto u = fhe::hsub(fhe::scalar_mul(a.numerator(), static_cast<std::int64_t>(b.denominator())),
                     fhe::scalar_mul(b.numerator(), static_cast<std::int64_t>(a.denominator())));
  return EncryptedRational(std::move(u), v);
}

EncryptedRational mul(const EncryptedRational& a, const EncryptedRational& b) {
  const std::uint64_t q = a.numerator().params().q;
  const std::uint64_t v = encrypted_den_product(a.denominator(), b.denominator(), q);
  return EncryptedRational(fhe::hmul(a.numerator(), b.numerator()), v);
}

EncryptedRational const_mul(const EncryptedRational& a, const PlainRational& c) {
  const std::uint64_t q = a.numerator().params().q;
  if (c.denominator == 0) fail(Errc::invalid_argument, "constant with zero denominator");
  const std::uint64_t v = encrypted_den_product(a.denominator(), c.denominator, q);
  return EncryptedRational(fhe::scalar_mul(a.numerator(), c.numerator), v);
}

EncryptedRational weighted_sum_common_denominator(std::span<const WeightedTerm> terms,
                                                  std::uint64_t base_denominator) {
  if (terms.empty()) fail(Errc::empty_input, "weighted sum over an empty term list");
  for (const auto& t : terms)
    if (t.value->denominator() != 1)
      fail(Errc::invalid_argument, "weighted sum terms must have denominator 1");
  fhe::Ciphertext acc = fhe::scalar_mul(terms[0].value->numerator(), terms[0].weight);
  for (std::size_t i = 1; i < terms.size(); ++i)
    acc = fhe::hadd(acc, fhe::scalar_mul(terms[i].value->numerator(), terms[i].weight));
  return EncryptedRational(std::move(acc), base_denominator);
}

PlainRational decrypt_rational(const fhe::SecretKey& sk, const EncryptedRational& a) {
  return {fhe::decrypt(sk, a.numerator()), a.denominator()};
}

void write_encrypted_rational(std::ostream& out, const EncryptedRational& a) {
  fhe::write_ciphertext(out, a.numerator());
  io::write_u64(out, a.denominator());
}

EncryptedRational read_encrypted_rational(std::istream& in) {
  auto numerator = fhe::read_ciphertext(in);
  const std::uint64_t denominator = io::read_u64(in);
  if (denominator == 0) fail(Errc::format, "encrypted rational with zero denominator");
  return EncryptedRational(std::move(numerator), denominator);
}

}  // namespace csurf::rational
