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
#include <optional>
#include <vector>

#include "csurf/fhe/refresh.hpp"
#include "csurf/rational/rational.hpp"
#include "csurf/surf/geometry.hpp"
#include "csurf/surf/image.hpp"
#include "csurf/surf/pyramid.hpp"

namespace csurf::surf {

using rational::EncryptedRational;

// Pixel ciphertexts, all with denominator 1.
struct EncryptedImage {
  std::size_t height = 0, width = 0;
  std::uint32_t bound = 255;
  std::vector<EncryptedRational> pixels;

  const EncryptedRational& at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
};

// (height+1) x (width+1) prefix sums; row 0 and column 0 are encrypted zeros.
struct EncryptedIntegralImage {
  std::size_t height = 0, width = 0;  // of the source image
  std::uint32_t bound = 255;
  std::vector<EncryptedRational> entries;

  const EncryptedRational& at(std::size_t i, std::size_t j) const { return entries[i * (width + 1) + j]; }
};

struct RefreshPolicy {
  std::size_t every_rows = 0;  // 0 disables row refresh of the integral image
  fhe::RefreshService* service = nullptr;
  // Refresh Haar numerators when the products would cross the noise threshold.
  bool before_multiply = true;

  static RefreshPolicy disabled() { return {}; }
};

struct PipelineStats {
  std::uint64_t integral_refreshes = 0;
  std::uint64_t haar_refreshes = 0;
  std::uint64_t max_noise = 0;
  std::uint64_t may_wrap_points = 0;  // public bound cannot rule out numerator wrap
};

// Each pixel encrypted with its own rng stream derived from `seed`, so the
// result does not depend on the worker count.
EncryptedImage encrypt_image(const fhe::PublicKey& pk, const GrayImage& img, std::uint64_t seed,
                             std::size_t workers = 1);

// Raster-order recurrence int[i][j] = p + int[i-1][j] + int[i][j-1] - int[i-1][j-1].
// Throws Errc::noise_budget_exceeded if an entry reaches the decryption
// threshold (only possible when the policy leaves noise unchecked).
EncryptedIntegralImage integral_image(const fhe::PublicKey& pk, const EncryptedImage& img,
                                      const RefreshPolicy& policy, std::uint64_t seed,
                                      PipelineStats* stats = nullptr);

// Rect in image pixel coordinates. Throws Errc::out_of_bounds.
EncryptedRational region_sum(const EncryptedIntegralImage& ii, const Rect& rect);

struct HaarResponse {
  EncryptedRational dxx, dyy, dxy;  // all with denominator V
};

// Empty when the footprint centred at (row, col) leaves the image.
std::optional<HaarResponse> haar_response(const EncryptedIntegralImage& ii, std::size_t row, std::size_t col,
                                          const FilterGeometry& geom, std::uint64_t base_denominator);

// (100 dxx dyy - 81 dxy^2) / (100 V^2)
EncryptedRational hessian_determinant(const HaarResponse& h);
// dxx + dyy by blind addition: denominator V^2.
EncryptedRational hessian_trace(const HaarResponse& h);

struct BuildOptions {
  PyramidConfig config;
  std::uint64_t base_denominator = 10000;
  RefreshPolicy refresh;
  std::size_t workers = 1;
};

EncryptedPyramid build_pyramid(const EncryptedIntegralImage& ii, const BuildOptions& options,
                               PipelineStats* stats = nullptr);

// Throws Errc::decryption_failure naming the failing (octave, layer, x, y).
PlainPyramid decrypt_pyramid(const fhe::SecretKey& sk, const EncryptedPyramid& pyr, std::size_t workers = 1);

}  // namespace csurf::surf
