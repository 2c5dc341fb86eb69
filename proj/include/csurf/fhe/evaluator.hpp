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
#include <optional>
#include <random>

#include "csurf/fhe/ciphertext.hpp"

namespace csurf::fhe {

using Rng = std::mt19937_64;

// Independent deterministic stream for (seed, stream).
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Number of LWE samples in a public key (m = N).
std::uint64_t lwe_samples(const FheParams& params) noexcept;

// Noise of a fresh encryption: m * sigma (gsw), 0 (mirror).
std::uint64_t fresh_noise_bound(const FheParams& params, Backend backend) noexcept;

// Ciphertexts with noise_level at or above this fail to decrypt. Bit-wise
// message recovery needs every row error below q/4.
std::uint64_t noise_threshold(const FheParams& params) noexcept;

KeyPair keygen(const FheParams& params, Backend backend, std::uint64_t seed);

// `magnitude_bound` is the public bound stored with the ciphertext; defaults
// to |m|.
Ciphertext encrypt(const PublicKey& pk, std::int64_t m, Rng& rng,
                   std::optional<std::uint64_t> magnitude_bound = std::nullopt);

// Throws Errc::decryption_failure when the noise estimate reaches the
// threshold. A true overflow below the estimate cannot happen, since the
// estimate is an upper bound.
std::int64_t decrypt(const SecretKey& sk, const Ciphertext& ct);

bool decryptable(const Ciphertext& ct) noexcept;
std::uint64_t noise_estimate(const Ciphertext& ct) noexcept;

Ciphertext hadd(const Ciphertext& a, const Ciphertext& b);
Ciphertext hsub(const Ciphertext& a, const Ciphertext& b);
Ciphertext hmul(const Ciphertext& a, const Ciphertext& b);
Ciphertext scalar_mul(const Ciphertext& a, std::int64_t k);

// Noise level hmul(a, b) would produce.
std::uint64_t predicted_mul_noise(const Ciphertext& a, const Ciphertext& b) noexcept;

// Decrypt and re-encrypt under the same key pair; the magnitude bound carries
// over.
Ciphertext recrypt(const KeyPair& keys, const Ciphertext& ct, Rng& rng);

}  // namespace csurf::fhe
