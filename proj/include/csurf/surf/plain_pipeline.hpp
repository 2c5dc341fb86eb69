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

// Integer-only rendering of the same detector: exact 64-bit checked
// arithmetic, no ciphertexts. Used as the oracle for the encrypted pipeline
// and for parameter sweeps too wide for a given ring.

#include <cstdint>
#include <vector>

#include "csurf/surf/image.hpp"
#include "csurf/surf/pyramid.hpp"

namespace csurf::surf {

// (m+1) x (n+1) prefix sums with a zero first row and column.
std::vector<std::int64_t> plain_integral_image(const GrayImage& img);

struct PlainHaar {
  std::int64_t dxx, dyy, dxy;  // numerators over V
};

PlainHaar plain_haar(const std::vector<std::int64_t>& integral, std::size_t width, std::size_t top,
                     std::size_t left, const FilterGeometry& geom, std::uint64_t base_denominator);

// Throws Errc::numerator_overflow / denominator_overflow if 64 bits do not suffice.
PlainPyramid plain_pyramid(const GrayImage& img, const PyramidConfig& config, std::uint64_t base_denominator);

}  // namespace csurf::surf
