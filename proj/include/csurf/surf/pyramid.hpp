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
#include <string>
#include <vector>

#include "csurf/error.hpp"
#include "csurf/rational/rational.hpp"
#include "csurf/surf/geometry.hpp"

namespace csurf::surf {

template <class T>
struct ResponsePair {
  T determinant;
  T trace;
};

template <class T>
struct PyramidLayer {
  std::size_t octave = 0, layer = 0;
  std::size_t filter_size = 0, step = 1;
  std::size_t rows = 0, cols = 0;
  // Row-major; empty where the filter footprint leaves the image.
  std::vector<std::optional<ResponsePair<T>>> cells;

  const std::optional<ResponsePair<T>>& at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
  std::optional<ResponsePair<T>>& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
  std::size_t valid_count() const {
    std::size_t k = 0;
    for (const auto& c : cells) k += c.has_value();
    return k;
  }
};

template <class T>
struct ScaleSpacePyramid {
  PyramidConfig config;
  std::size_t height = 0, width = 0;
  std::uint64_t base_denominator = 1;  // V; 0 for the unquantized float reference
  std::vector<PyramidLayer<T>> layers;  // octave-major

  const PyramidLayer<T>& layer(std::size_t octave, std::size_t l) const {
    if (octave >= config.octaves || l >= config.layers)
      fail(Errc::out_of_bounds, "no layer (" + std::to_string(octave) + ", " + std::to_string(l) + ")");
    return layers[octave * config.layers + l];
  }
  PyramidLayer<T>& layer(std::size_t octave, std::size_t l) {
    return const_cast<PyramidLayer<T>&>(static_cast<const ScaleSpacePyramid&>(*this).layer(octave, l));
  }
  std::size_t valid_count() const {
    std::size_t k = 0;
    for (const auto& l : layers) k += l.valid_count();
    return k;
  }
};

using EncryptedPyramid = ScaleSpacePyramid<rational::EncryptedRational>;
using PlainPyramid = ScaleSpacePyramid<rational::PlainRational>;
using FloatPyramid = ScaleSpacePyramid<double>;

// Empty pyramid with every layer sized by the sampling grid.
template <class T>
ScaleSpacePyramid<T> make_pyramid_shell(const PyramidConfig& config, std::size_t height, std::size_t width,
                                        std::uint64_t base_denominator) {
  config.validate();
  ScaleSpacePyramid<T> p;
  p.config = config;
  p.height = height;
  p.width = width;
  p.base_denominator = base_denominator;
  for (std::size_t o = 0; o < config.octaves; ++o)
    for (std::size_t l = 0; l < config.layers; ++l) {
      PyramidLayer<T> layer;
      layer.octave = o;
      layer.layer = l;
      layer.filter_size = filter_size(o, l);
      const auto grid = sample_grid(height, width, o);
      layer.step = grid.step;
      layer.rows = grid.rows;
      layer.cols = grid.cols;
      layer.cells.resize(grid.rows * grid.cols);
      p.layers.push_back(std::move(layer));
    }
  return p;
}

// Whether cell (r, c) of a layer has a full footprint.
template <class T>
bool cell_has_footprint(const ScaleSpacePyramid<T>& p, const PyramidLayer<T>& layer, std::size_t r, std::size_t c) {
  return footprint_origin(r * layer.step, c * layer.step, layer.filter_size, p.height, p.width).has_value();
}

FloatPyramid to_float(const PlainPyramid& p);

}  // namespace csurf::surf
