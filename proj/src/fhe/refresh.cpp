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

#include "csurf/fhe/refresh.hpp"

namespace csurf::fhe {

Ciphertext KeyholderRefresh::refresh(const Ciphertext& ct) {
  std::lock_guard lock(mutex_);
  Ciphertext fresh = recrypt(keys_, ct, rng_);
  ++count_;
  return fresh;
}

std::uint64_t KeyholderRefresh::refresh_count() const {
  std::lock_guard lock(mutex_);
  return count_;
}

}  // namespace csurf::fhe
