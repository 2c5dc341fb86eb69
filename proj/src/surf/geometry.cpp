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

#include "csurf/surf/geometry.hpp"

#include <string>

#include "csurf/error.hpp"

namespace csurf::surf {

void PyramidConfig::validate() const {
  if (octaves == 0 || layers == 0) fail(Errc::invalid_params, "pyramid needs at least one octave and one layer");
  if (octaves > 8 || layers > 16)
    fail(Errc::invalid_params, "pyramid config too large (octaves <= 8, layers <= 16)");
}

std::size_t filter_size(std::size_t octave, std::size_t layer) noexcept {
  return 3 * ((std::size_t{2} << octave) * (layer + 1) + 1);
}

std::size_t sampling_step(std::size_t octave) noexcept { return std::size_t{1} << octave; }

FilterGeometry filter_geometry(std::size_t octave, std::size_t layer, const PyramidConfig& config) {
  if (octave >= config.octaves || layer >= config.layers)
    fail(Errc::out_of_bounds, "filter index (" + std::to_string(octave) + ", " + std::to_string(layer) +
                                  ") outside a " + std::to_string(config.octaves) + "x" +
                                  std::to_string(config.layers) + " pyramid");
  FilterGeometry g;
  g.octave = octave;
  g.layer = layer;
  g.size = filter_size(octave, layer);
  const std::size_t L = g.size, l = L / 3, half = L / 2;
  const std::size_t band = 2 * l - 1;
  const std::size_t band_top = (L - band) / 2;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::int64_t w = k == 1 ? -2 : 1;
    g.dxx[k] = {{band_top, k * l, band_top + band, (k + 1) * l}, w};
    g.dyy[k] = {{k * l, band_top, (k + 1) * l, band_top + band}, w};
  }
  const std::size_t near = half - l, far = half + 1;
  g.dxy[0] = {{near, near, half, half}, 1};
  g.dxy[1] = {{near, far, half, far + l}, -1};
  g.dxy[2] = {{far, near, far + l, half}, -1};
  g.dxy[3] = {{far, far, far + l, far + l}, 1};
  g.lobe = l;
  return g;
}

SampleGrid sample_grid(std::size_t height, std::size_t width, std::size_t octave) noexcept {
  const std::size_t s = sampling_step(octave);
  return {(height + s - 1) / s, (width + s - 1) / s, s};
}

std::optional<std::array<std::size_t, 2>> footprint_origin(std::size_t row, std::size_t col, std::size_t size,
                                                          std::size_t height, std::size_t width) noexcept {
  const std::size_t half = size / 2;
  if (row < half || col < half || row + half >= height || col + half >= width) return std::nullopt;
  return std::array<std::size_t, 2>{row - half, col - half};
}

std::int64_t quantized_unit(std::size_t size, std::uint64_t base_denominator) noexcept {
  const std::uint64_t area = std::uint64_t{size} * size;
  return static_cast<std::int64_t>((base_denominator + area / 2) / area);
}

}  // namespace csurf::surf
