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

#include "csurf/fhe/params.hpp"

#include <string>

#include "csurf/error.hpp"

namespace csurf::fhe {

std::string_view to_string(Backend backend) noexcept {
  return backend == Backend::gsw ? "gsw" : "mirror";
}

Backend parse_backend(std::string_view name) {
  if (name == "gsw") return Backend::gsw;
  if (name == "mirror") return Backend::mirror;
  fail(Errc::invalid_argument, "unknown backend '" + std::string(name) + "' (expected gsw or mirror)");
}

void FheParams::validate(Backend backend) const {
  if (q < 4) fail(Errc::invalid_params, "ring modulus q must be at least 4, got " + std::to_string(q));
  if (n == 0) fail(Errc::invalid_params, "lattice dimension n must be positive");
  if (sigma >= q) fail(Errc::invalid_params, "noise bound sigma must be below q");
  if (backend == Backend::gsw) {
    if (!std::has_single_bit(q))
      fail(Errc::invalid_params, "gsw backend needs q to be a power of two, got " + std::to_string(q));
    // 2^16 keeps a single ciphertext under ~2 GiB.
    if (n > 4096 || dimension() > (std::uint64_t{1} << 16))
      fail(Errc::invalid_params, "ciphertext dimension N = (n+1)*ell too large");
  }
}

}  // namespace csurf::fhe
