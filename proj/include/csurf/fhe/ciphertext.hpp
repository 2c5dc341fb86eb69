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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "csurf/fhe/params.hpp"

namespace csurf::fhe {

// Row stride of the compact GSW matrices: n+1 rounded up to a multiple of 4
// so the kernels can run whole vector lanes over zero padding.
inline std::size_t padded_width(std::uint64_t n) noexcept {
  return static_cast<std::size_t>((n + 1 + 3) / 4 * 4);
}

// An encryption of one element of Z_q.
//
// gsw: the flattened N x N binary body C is held as D = BitDecomp^-1(C), an
// N x (n+1) matrix over Z_q. Body entry (i, j) is bit (j % ell) of
// D[i][j / ell]; body_entry() exposes it.
//
// mirror: stores the plaintext residue directly; noise is always zero.
//
// Both carry a public bound on |plaintext| (signed) used by the noise rules
// and by overflow warnings. A bound >= q/2 means "may have wrapped".
class Ciphertext {
 public:
  static Ciphertext make_mirror(const FheParams& params, std::uint64_t residue,
                                std::uint64_t magnitude_bound);
  static Ciphertext make_gsw(const FheParams& params, std::vector<std::uint64_t> rows,
                             std::uint64_t noise_level, std::uint64_t magnitude_bound);

  Backend backend() const noexcept { return backend_; }
  const FheParams& params() const noexcept { return params_; }
  std::uint64_t noise_level() const noexcept { return noise_; }
  std::uint64_t magnitude_bound() const noexcept { return magnitude_; }

  // True when the public magnitude bound no longer rules out wraparound.
  bool may_wrap() const noexcept { return magnitude_ >= params_.q - params_.q / 2; }

  std::uint64_t mirror_residue() const noexcept { return residue_; }

  std::span<const std::uint64_t> gsw_rows() const noexcept;
  std::size_t stride() const noexcept { return padded_width(params_.n); }

  // Entry of the N x N binary body (gsw) or the single stored element (mirror,
  // i = j = 0).
  std::uint64_t body_entry(std::size_t i, std::size_t j) const;
  std::size_t body_dimension() const noexcept;

  // Same ciphertext with the magnitude bound tightened to min(current, bound).
  Ciphertext with_magnitude_bound(std::uint64_t bound) const;

 private:
  Ciphertext() = default;

  FheParams params_{};
  Backend backend_ = Backend::mirror;
  std::uint64_t noise_ = 0;
  std::uint64_t magnitude_ = 0;
  std::uint64_t residue_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> rows_;
};

struct SecretKey {
  FheParams params;
  Backend backend = Backend::gsw;
  std::vector<std::uint64_t> s;  // (1, -t), n+1 elements; empty for mirror
};

struct PublicKey {
  FheParams params;
  Backend backend = Backend::gsw;
  std::size_t samples = 0;       // LWE rows
  std::vector<std::uint64_t> a;  // samples x padded_width(n), A = [b | B]

  std::size_t stride() const noexcept { return padded_width(params.n); }
};

struct KeyPair {
  SecretKey secret;
  PublicKey pub;
};

}  // namespace csurf::fhe
