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
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

namespace csurf::surf {

// Row-major grayscale image with a declared pixel bound B (the file's maxval,
// not the observed maximum).
struct GrayImage {
  std::size_t height = 0;  // m
  std::size_t width = 0;   // n
  std::uint32_t bound = 255;
  std::vector<std::uint32_t> pixels;

  GrayImage() = default;
  GrayImage(std::size_t h, std::size_t w, std::uint32_t b = 255, std::uint32_t fill = 0)
      : height(h), width(w), bound(b), pixels(h * w, fill) {}

  std::uint32_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
  std::uint32_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }

  // Throws Errc::invalid_argument on empty dimensions or pixels above bound.
  void validate() const;
};

// Binary P5 with maxval <= 255. Anything else is Errc::format.
GrayImage read_pgm(std::istream& in);
void write_pgm(std::ostream& out, const GrayImage& img);
GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace csurf::surf
