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

#include "csurf/fhe/evaluator.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "csurf/error.hpp"
#include "csurf/kernels/ring_kernels.hpp"

namespace csurf::fhe {

namespace {

std::uint64_t ring_mask(const FheParams& params) noexcept { return params.q - 1; }

void require_compatible(const Ciphertext& a, const Ciphertext& b) {
  if (a.backend() != b.backend())
    fail(Errc::params_mismatch, "ciphertexts from different backends (" +
                                    std::string(to_string(a.backend())) + " vs " +
                                    std::string(to_string(b.backend())) + ")");
  if (!a.params().compatible(b.params()))
    fail(Errc::params_mismatch, "ciphertexts under different parameters (q=" +
                                    std::to_string(a.params().q) + ", n=" + std::to_string(a.params().n) +
                                    " vs q=" + std::to_string(b.params().q) + ", n=" +
                                    std::to_string(b.params().n) + ")");
}

std::uint64_t signed_bound(const Ciphertext& ct) noexcept {
  return std::min(ct.magnitude_bound(), ct.params().q - ct.params().q / 2);
}

// BitDecomp of one compact row: n+1 ring elements -> N bits.
void bit_decompose_row(const std::uint64_t* row, std::size_t width, std::size_t ell,
                       std::span<std::uint64_t> words) {
  std::fill(words.begin(), words.end(), 0);
  for (std::size_t b = 0; b < width; ++b) {
    const std::size_t offset = b * ell;
    const std::size_t w = offset / 64;
    const std::size_t shift = offset % 64;
    words[w] |= row[b] << shift;
    if (shift != 0 && shift + ell > 64) words[w + 1] |= row[b] >> (64 - shift);
  }
}

void mask_all(std::vector<std::uint64_t>& rows, std::uint64_t mask) {
  for (auto& v : rows) v &= mask;
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::uint64_t lwe_samples(const FheParams& params) noexcept { return params.dimension(); }

std::uint64_t fresh_noise_bound(const FheParams& params, Backend backend) noexcept {
  return backend == Backend::mirror ? 0 : sat_mul(lwe_samples(params), params.sigma);
}

std::uint64_t noise_threshold(const FheParams& params) noexcept { return params.q / 4; }

KeyPair keygen(const FheParams& params, Backend backend, std::uint64_t seed) {
  params.validate(backend);
  KeyPair keys;
  keys.secret.params = params;
  keys.secret.backend = backend;
  keys.pub.params = params;
  keys.pub.backend = backend;
  if (backend == Backend::mirror) return keys;

  Rng rng = make_rng(seed, 1);
  const std::uint64_t mask = ring_mask(params);
  const std::size_t width = static_cast<std::size_t>(params.n + 1);
  const std::size_t stride = padded_width(params.n);

  std::vector<std::uint64_t> t(width - 1);
  for (auto& v : t) v = rng() & mask;
  keys.secret.s.resize(width);
  keys.secret.s[0] = 1;
  for (std::size_t i = 0; i + 1 < width; ++i) keys.secret.s[i + 1] = (params.q - t[i]) & mask;

  std::uniform_int_distribution<std::uint64_t> error(0, 2 * params.sigma);
  keys.pub.samples = static_cast<std::size_t>(lwe_samples(params));
  keys.pub.a.assign(keys.pub.samples * stride, 0);
  for (std::size_t r = 0; r < keys.pub.samples; ++r) {
    std::uint64_t* row = keys.pub.a.data() + r * stride;
    std::uint64_t b = error(rng) - params.sigma;  // e, wraps for negative values
    for (std::size_t j = 0; j + 1 < width; ++j) {
      row[j + 1] = rng() & mask;
      b += row[j + 1] * t[j];
    }
    row[0] = b & mask;
  }
  return keys;
}

Ciphertext encrypt(const PublicKey& pk, std::int64_t m, Rng& rng,
                   std::optional<std::uint64_t> magnitude_bound) {
  const FheParams& params = pk.params;
  if (!in_message_range(m, params.q))
    fail(Errc::message_out_of_range,
         "message " + std::to_string(m) + " outside [-q/2, q/2) for q=" + std::to_string(params.q));
  const std::uint64_t bound = magnitude_bound.value_or(abs_u64(m));
  const std::uint64_t mu = to_ring(m, params.q);
  if (pk.backend == Backend::mirror) return Ciphertext::make_mirror(params, mu, bound);

  const std::size_t dim = static_cast<std::size_t>(params.dimension());
  const std::size_t ell = static_cast<std::size_t>(params.ell());
  const std::size_t stride = pk.stride();
  const std::uint64_t mask = ring_mask(params);

  // C = Flatten(mu * I + BitDecomp(R * A)), held compactly as R * A + mu * G.
  std::vector<std::uint64_t> rows(dim * stride, 0);
  std::vector<std::uint64_t> r_bits((pk.samples + 63) / 64);
  for (std::size_t i = 0; i < dim; ++i) {
    for (auto& w : r_bits) w = rng();
    std::uint64_t* out = rows.data() + i * stride;
    kernels::masked_row_sum(r_bits, pk.samples, pk.a.data(), stride, stride, out);
    out[i / ell] += mu << (i % ell);
  }
  mask_all(rows, mask);
  return Ciphertext::make_gsw(params, std::move(rows), fresh_noise_bound(params, Backend::gsw), bound);
}

bool decryptable(const Ciphertext& ct) noexcept {
  return ct.backend() == Backend::mirror || ct.noise_level() < noise_threshold(ct.params());
}

std::uint64_t noise_estimate(const Ciphertext& ct) noexcept { return ct.noise_level(); }

std::int64_t decrypt(const SecretKey& sk, const Ciphertext& ct) {
  if (sk.backend != ct.backend() || !sk.params.compatible(ct.params()))
    fail(Errc::params_mismatch, "secret key does not match ciphertext parameters");
  const FheParams& params = ct.params();
  if (ct.backend() == Backend::mirror) return to_signed(ct.mirror_residue(), params.q);
  if (!decryptable(ct))
    fail(Errc::decryption_failure, "noise estimate " + std::to_string(ct.noise_level()) +
                                       " reached the decryption threshold q/4 = " +
                                       std::to_string(noise_threshold(params)));

  const std::size_t ell = static_cast<std::size_t>(params.ell());
  const std::size_t width = static_cast<std::size_t>(params.n + 1);
  const std::size_t stride = ct.stride();
  const std::uint64_t mask = ring_mask(params);
  const auto rows = ct.gsw_rows();

  // Row j of C*v is mu*2^j + e_j (the first block of v is 1, 2, 4, ...).
  // Peel mu off one bit at a time starting from the row with 2^j = q/2.
  std::uint64_t mu = 0;
  for (std::size_t bit = 0; bit < ell; ++bit) {
    const std::size_t j = ell - 1 - bit;
    const std::uint64_t* row = rows.data() + j * stride;
    std::uint64_t x = 0;
    for (std::size_t b = 0; b < width; ++b) x += row[b] * sk.s[b];
    x = (x - (mu << j)) & mask;
    const bool set = ((x + params.q / 4) & mask) >= params.q / 2;
    mu |= static_cast<std::uint64_t>(set) << bit;
  }
  return to_signed(mu, params.q);
}

Ciphertext hadd(const Ciphertext& a, const Ciphertext& b) {
  require_compatible(a, b);
  const FheParams& params = a.params();
  const std::uint64_t magnitude = sat_add(a.magnitude_bound(), b.magnitude_bound());
  if (a.backend() == Backend::mirror)
    return Ciphertext::make_mirror(params, add_mod(a.mirror_residue(), b.mirror_residue(), params.q),
                                   magnitude);
  std::vector<std::uint64_t> rows(a.gsw_rows().begin(), a.gsw_rows().end());
  kernels::ring_axpy(1, b.gsw_rows(), rows, ring_mask(params));
  return Ciphertext::make_gsw(params, std::move(rows), sat_add(a.noise_level(), b.noise_level()),
                              magnitude);
}

Ciphertext scalar_mul(const Ciphertext& a, std::int64_t k) {
  const FheParams& params = a.params();
  if (!in_message_range(k, params.q))
    fail(Errc::message_out_of_range, "constant " + std::to_string(k) + " outside [-q/2, q/2)");
  const std::uint64_t kr = to_ring(k, params.q);
  const std::uint64_t magnitude = sat_mul(a.magnitude_bound(), abs_u64(k));
  if (a.backend() == Backend::mirror)
    return Ciphertext::make_mirror(params, mul_mod(a.mirror_residue(), kr, params.q), magnitude);

  const std::size_t dim = static_cast<std::size_t>(params.dimension());
  const std::size_t ell = static_cast<std::size_t>(params.ell());
  const std::size_t stride = a.stride();
  const std::uint64_t mask = ring_mask(params);
  const auto src = a.gsw_rows();
  std::vector<std::uint64_t> rows(src.size(), 0);

  if (abs_u64(k) <= ell) {
    // Flatten(k * C): noise scales by |k|.
    kernels::ring_axpy(kr, src, rows, mask);
    return Ciphertext::make_gsw(params, std::move(rows), sat_mul(a.noise_level(), abs_u64(k)),
                                magnitude);
  }
  // Flatten(M_k * C) with M_k = Flatten(k * I): each row of M_k has at most
  // ell ones, all inside one block, so noise scales by ell.
  for (std::size_t i = 0; i < dim; ++i) {
    const std::uint64_t selector = (kr << (i % ell)) & mask;
    const std::array<std::uint64_t, 1> bits{selector};
    std::uint64_t* out = rows.data() + i * stride;
    kernels::masked_row_sum(bits, ell, src.data() + (i / ell) * ell * stride, stride, stride, out);
  }
  mask_all(rows, mask);
  return Ciphertext::make_gsw(params, std::move(rows), sat_mul(a.noise_level(), ell), magnitude);
}

Ciphertext hsub(const Ciphertext& a, const Ciphertext& b) { return hadd(a, scalar_mul(b, -1)); }

std::uint64_t predicted_mul_noise(const Ciphertext& a, const Ciphertext& b) noexcept {
  if (a.backend() == Backend::mirror) return 0;
  // C1*C2*v = mu2*(mu1*v + e1) + C1*e2, and C1 is binary with N columns.
  const std::uint64_t dim = a.params().dimension();
  const std::uint64_t ab = sat_add(sat_mul(signed_bound(b), a.noise_level()), sat_mul(dim, b.noise_level()));
  const std::uint64_t ba = sat_add(sat_mul(signed_bound(a), b.noise_level()), sat_mul(dim, a.noise_level()));
  return std::min(ab, ba);
}

Ciphertext hmul(const Ciphertext& a, const Ciphertext& b) {
  require_compatible(a, b);
  const FheParams& params = a.params();
  const std::uint64_t magnitude = sat_mul(a.magnitude_bound(), b.magnitude_bound());
  if (a.backend() == Backend::mirror)
    return Ciphertext::make_mirror(params, mul_mod(a.mirror_residue(), b.mirror_residue(), params.q),
                                   magnitude);

  const std::uint64_t dim64 = params.dimension();
  const std::uint64_t ab = sat_add(sat_mul(signed_bound(b), a.noise_level()), sat_mul(dim64, b.noise_level()));
  const std::uint64_t ba = sat_add(sat_mul(signed_bound(a), b.noise_level()), sat_mul(dim64, a.noise_level()));
  const bool swap = ba < ab;
  const Ciphertext& left = swap ? b : a;
  const Ciphertext& right = swap ? a : b;

  const std::size_t dim = static_cast<std::size_t>(dim64);
  const std::size_t ell = static_cast<std::size_t>(params.ell());
  const std::size_t width = static_cast<std::size_t>(params.n + 1);
  const std::size_t stride = a.stride();
  const auto lhs = left.gsw_rows();
  const auto rhs = right.gsw_rows();

  // Flatten(C1 * C2) = BitDecomp(BitDecomp(D1) * D2).
  std::vector<std::uint64_t> rows(dim * stride, 0);
  std::vector<std::uint64_t> bits((dim + 63) / 64);
  for (std::size_t i = 0; i < dim; ++i) {
    bit_decompose_row(lhs.data() + i * stride, width, ell, bits);
    kernels::masked_row_sum(bits, dim, rhs.data(), stride, stride, rows.data() + i * stride);
  }
  mask_all(rows, ring_mask(params));
  return Ciphertext::make_gsw(params, std::move(rows), std::min(ab, ba), magnitude);
}

Ciphertext recrypt(const KeyPair& keys, const Ciphertext& ct, Rng& rng) {
  const std::int64_t m = decrypt(keys.secret, ct);
  return encrypt(keys.pub, m, rng, ct.magnitude_bound());
}

}  // namespace csurf::fhe
