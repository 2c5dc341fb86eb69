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

#include "csurf/fhe/ciphertext.hpp"

#include <algorithm>
#include <string>

#include "csurf/error.hpp"

namespace csurf::fhe {

Ciphertext Ciphertext::make_mirror(const FheParams& params, std::uint64_t residue,
                                   std::uint64_t magnitude_bound) {
  if (residue >= params.q) fail(Errc::format, "mirror residue outside [0, q)");
  Ciphertext ct;
  ct.params_ = params;
  ct.backend_ = Backend::mirror;
  ct.residue_ = residue;
  ct.magnitude_ = magnitude_bound;
  return ct;
}

Ciphertext Ciphertext::make_gsw(const FheParams& params, std::vector<std::uint64_t> rows,
                                std::uint64_t noise_level, std::uint64_t magnitude_bound) {
  const std::size_t stride = padded_width(params.n);
  if (rows.size() != params.dimension() * stride)
    fail(Errc::format, "gsw ciphertext has " + std::to_string(rows.size()) + " words, expected " +
                           std::to_string(params.dimension() * stride));
  if (std::any_of(rows.begin(), rows.end(), [&](std::uint64_t v) { return v >= params.q; }))
    fail(Errc::format, "gsw ciphertext entry outside [0, q)");
  Ciphertext ct;
  ct.params_ = params;
  ct.backend_ = Backend::gsw;
  ct.noise_ = noise_level;
  ct.magnitude_ = magnitude_bound;
  ct.rows_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(rows));
  return ct;
}

std::span<const std::uint64_t> Ciphertext::gsw_rows() const noexcept {
  if (!rows_) return {};
  return {rows_->data(), rows_->size()};
}

std::size_t Ciphertext::body_dimension() const noexcept {
  return backend_ == Backend::gsw ? static_cast<std::size_t>(params_.dimension()) : 1;
}

std::uint64_t Ciphertext::body_entry(std::size_t i, std::size_t j) const {
  const std::size_t dim = body_dimension();
  if (i >= dim || j >= dim) fail(Errc::out_of_bounds, "body index outside the ciphertext");
  if (backend_ == Backend::mirror) return residue_;
  const std::size_t ell = static_cast<std::size_t>(params_.ell());
  return ((*rows_)[i * stride() + j / ell] >> (j % ell)) & 1u;
}

Ciphertext Ciphertext::with_magnitude_bound(std::uint64_t bound) const {
  Ciphertext ct = *this;
  ct.magnitude_ = std::min(magnitude_, bound);
  return ct;
}

}  // namespace csurf::fhe
