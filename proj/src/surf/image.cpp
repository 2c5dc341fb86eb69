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

#include "csurf/surf/image.hpp"

#include <cctype>
#include <string>

#include "csurf/error.hpp"
#include "csurf/io/binary.hpp"

namespace csurf::surf {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) return token;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  if (token.empty()) fail(Errc::format, "truncated PGM header");
  return token;
}

std::size_t header_number(std::istream& in, const char* what) {
  const std::string token = header_token(in);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size() || token.empty()) fail(Errc::format, std::string("bad PGM ") + what + ": '" + token + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

void GrayImage::validate() const {
  if (height == 0 || width == 0) fail(Errc::invalid_argument, "image has an empty dimension");
  if (pixels.size() != height * width) fail(Errc::invalid_argument, "pixel count does not match dimensions");
  for (std::size_t i = 0; i < pixels.size(); ++i)
    if (pixels[i] > bound)
      fail(Errc::invalid_argument, "pixel " + std::to_string(i) + " = " + std::to_string(pixels[i]) +
                                       " exceeds bound " + std::to_string(bound));
}

GrayImage read_pgm(std::istream& in) {
  if (header_token(in) != "P5") fail(Errc::format, "not a binary PGM (expected P5)");
  const std::size_t width = header_number(in, "width");
  const std::size_t height = header_number(in, "height");
  const std::size_t maxval = header_number(in, "maxval");
  if (width == 0 || height == 0) fail(Errc::format, "PGM with zero dimension");
  if (width > 1u << 16 || height > 1u << 16) fail(Errc::format, "PGM dimensions too large");
  if (maxval == 0 || maxval > 255)
    fail(Errc::format, "unsupported PGM depth (maxval " + std::to_string(maxval) + "), only 8-bit is accepted");
  GrayImage img(height, width, static_cast<std::uint32_t>(maxval));
  std::vector<unsigned char> raw(width * height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) fail(Errc::format, "truncated PGM pixel data");
  for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = raw[i];
  img.validate();
  return img;
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  img.validate();
  if (img.bound > 255) fail(Errc::invalid_argument, "PGM output supports 8-bit images only");
  out << "P5\n" << img.width << ' ' << img.height << '\n' << img.bound << '\n';
  std::vector<unsigned char> raw(img.pixels.begin(), img.pixels.end());
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) fail(Errc::io, "failed writing PGM data");
}

GrayImage load_pgm(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return read_pgm(in);
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  auto out = io::open_output(path);
  write_pgm(out, img);
}

}  // namespace csurf::surf
