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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace csurf::surf {

struct PyramidConfig {
  std::size_t octaves = 3;
  std::size_t layers = 4;

  void validate() const;
};

// Half-open pixel rectangle [top, bottom) x [left, right).
struct Rect {
  std::size_t top = 0, left = 0, bottom = 0, right = 0;

  std::size_t area() const noexcept { return (bottom - top) * (right - left); }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Lobe {
  Rect rect;  // relative to the filter's top-left corner
  std::int64_t weight;
};

struct FilterGeometry {
  std::size_t octave = 0, layer = 0;
  std::size_t size = 0;  // L, odd
  std::size_t lobe = 0;  // l = L / 3
  std::array<Lobe, 3> dxx{};
  std::array<Lobe, 3> dyy{};
  std::array<Lobe, 4> dxy{};

  std::uint64_t normalization_area() const noexcept { return std::uint64_t{size} * size; }
};

// L = 3 * (2^(o+1) * (l+1) + 1): 9,15,21,27 / 15,27,39,51 / 27,51,75,99.
std::size_t filter_size(std::size_t octave, std::size_t layer) noexcept;
std::size_t sampling_step(std::size_t octave) noexcept;

// Throws Errc::out_of_bounds when (octave, layer) is outside the config.
FilterGeometry filter_geometry(std::size_t octave, std::size_t layer, const PyramidConfig& config = {});

// Sample cell (r, c) of an octave sits at pixel (r * step, c * step).
struct SampleGrid {
  std::size_t rows = 0, cols = 0, step = 1;
};
SampleGrid sample_grid(std::size_t height, std::size_t width, std::size_t octave) noexcept;

// Top-left of the filter centred at (row, col), if the whole footprint lies in
// a height x width image.
std::optional<std::array<std::size_t, 2>> footprint_origin(std::size_t row, std::size_t col, std::size_t size,
                                                          std::size_t height, std::size_t width) noexcept;

// Unit Haar constant 1/L^2 at denominator V, rounded half up. Every lobe
// weight is an integer multiple of this one value.
std::int64_t quantized_unit(std::size_t size, std::uint64_t base_denominator) noexcept;

}  // namespace csurf::surf
