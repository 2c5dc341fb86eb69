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
#include <mutex>

#include "csurf/fhe/evaluator.hpp"

namespace csurf::fhe {

// Boundary that hands back a fresh ciphertext of the same plaintext.
class RefreshService {
 public:
  virtual ~RefreshService() = default;
  virtual Ciphertext refresh(const Ciphertext& ct) = 0;
  virtual std::uint64_t refresh_count() const = 0;
};

// Holds the key pair and serializes requests; the rng stream is shared, so
// ciphertext bodies depend on request order while plaintexts do not.
class KeyholderRefresh final : public RefreshService {
 public:
  KeyholderRefresh(KeyPair keys, std::uint64_t seed) : keys_(std::move(keys)), rng_(make_rng(seed, 0x7265667265736875)) {}

  Ciphertext refresh(const Ciphertext& ct) override;
  std::uint64_t refresh_count() const override;

 private:
  KeyPair keys_;
  mutable std::mutex mutex_;
  Rng rng_;
  std::uint64_t count_ = 0;
};

}  // namespace csurf::fhe
