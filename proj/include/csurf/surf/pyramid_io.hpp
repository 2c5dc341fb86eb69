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

#include <filesystem>
#include <istream>
#include <ostream>

#include "csurf/surf/pipeline.hpp"
#include "csurf/surf/pyramid.hpp"

namespace csurf::surf {

// "CSURF-PYR" | version | octaves layers | height width | V | point count |
// (determinant, trace) EncryptedRational blocks for every valid point in
// (octave, layer, row, column) order. Valid points follow from the geometry.
void write_encrypted_pyramid(std::ostream& out, const EncryptedPyramid& pyr);
EncryptedPyramid read_encrypted_pyramid(std::istream& in);

// "CSURF-IMG" | version | height width B | one EncryptedRational per pixel.
void write_encrypted_image(std::ostream& out, const EncryptedImage& img);
EncryptedImage read_encrypted_image(std::istream& in);

// octave,layer,x,y,det_numerator,det_denominator,trace_numerator,trace_denominator,det_float,trace_float
void write_pyramid_csv(std::ostream& out, const PlainPyramid& pyr);

// Inverse of write_pyramid_csv for a pyramid of known shape. Rows must name
// valid points only; Errc::format otherwise.
PlainPyramid read_pyramid_csv(std::istream& in, const PyramidConfig& config, std::size_t height, std::size_t width,
                              std::uint64_t base_denominator);

// Shape sidecar for pyramid.csv: octaves, layers, height, width, V as key=value lines.
struct PyramidShape {
  PyramidConfig config;
  std::size_t height = 0, width = 0;
  std::uint64_t base_denominator = 0;
};
void write_pyramid_shape(std::ostream& out, const PyramidShape& shape);
PyramidShape read_pyramid_shape(std::istream& in);

void save_encrypted_pyramid(const std::filesystem::path& path, const EncryptedPyramid& pyr);
EncryptedPyramid load_encrypted_pyramid(const std::filesystem::path& path);
void save_encrypted_image(const std::filesystem::path& path, const EncryptedImage& img);
EncryptedImage load_encrypted_image(const std::filesystem::path& path);

}  // namespace csurf::surf
