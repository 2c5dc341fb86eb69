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

// Binary formats, all words 64-bit little-endian:
//
//   ciphertext  "CSURF-CT" | version u8 | q | n | ell | N | N*N body words | noise_level | magnitude_bound
//   secret key  "CSURF-SK" | version u8 | q | n | ell | N | sigma | count | count words
//   public key  "CSURF-PK" | version u8 | q | n | ell | N | sigma | samples | samples*(n+1) words
//
// Mirror objects write N = 1; a mirror ciphertext body is the single plaintext
// residue, mirror keys carry no words.

#include <filesystem>
#include <istream>
#include <ostream>

#include "csurf/fhe/ciphertext.hpp"

namespace csurf::fhe {

inline constexpr std::uint8_t kFormatVersion = 1;

void write_ciphertext(std::ostream& out, const Ciphertext& ct);
Ciphertext read_ciphertext(std::istream& in);

void write_secret_key(std::ostream& out, const SecretKey& sk);
SecretKey read_secret_key(std::istream& in);
void write_public_key(std::ostream& out, const PublicKey& pk);
PublicKey read_public_key(std::istream& in);

void save_key_pair(const std::filesystem::path& dir, const KeyPair& keys);
KeyPair load_key_pair(const std::filesystem::path& dir);
PublicKey load_public_key(const std::filesystem::path& dir);

inline constexpr const char* kSecretKeyFile = "secret.key";
inline constexpr const char* kPublicKeyFile = "public.key";

}  // namespace csurf::fhe
