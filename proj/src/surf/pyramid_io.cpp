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

#include "csurf/surf/pyramid_io.hpp"

#include <iomanip>
#include <sstream>

#include "csurf/error.hpp"
#include "csurf/io/binary.hpp"

namespace csurf::surf {

namespace {

constexpr std::uint8_t kVersion = 1;

std::uint64_t read_bounded(std::istream& in, std::uint64_t max, const char* what) {
  const std::uint64_t v = io::read_u64(in);
  if (v > max) fail(Errc::format, std::string("implausible ") + what + " " + std::to_string(v));
  return v;
}

}  // namespace

FloatPyramid to_float(const PlainPyramid& p) {
  auto out = make_pyramid_shell<double>(p.config, p.height, p.width, p.base_denominator);
  for (std::size_t k = 0; k < p.layers.size(); ++k)
    for (std::size_t i = 0; i < p.layers[k].cells.size(); ++i)
      if (const auto& cell = p.layers[k].cells[i])
        out.layers[k].cells[i].emplace(ResponsePair<double>{cell->determinant.to_double(), cell->trace.to_double()});
  return out;
}

void write_encrypted_pyramid(std::ostream& out, const EncryptedPyramid& pyr) {
  io::write_magic(out, "CSURF-PYR");
  io::write_u8(out, kVersion);
  io::write_u64(out, pyr.config.octaves);
  io::write_u64(out, pyr.config.layers);
  io::write_u64(out, pyr.height);
  io::write_u64(out, pyr.width);
  io::write_u64(out, pyr.base_denominator);
  io::write_u64(out, pyr.valid_count());
  for (const auto& layer : pyr.layers)
    for (const auto& cell : layer.cells)
      if (cell) {
        rational::write_encrypted_rational(out, cell->determinant);
        rational::write_encrypted_rational(out, cell->trace);
      }
  if (!out) fail(Errc::io, "failed writing encrypted pyramid");
}

EncryptedPyramid read_encrypted_pyramid(std::istream& in) {
  io::expect_magic(in, "CSURF-PYR", "encrypted pyramid");
  if (const auto v = io::read_u8(in); v != kVersion)
    fail(Errc::format, "unsupported pyramid format version " + std::to_string(v));
  PyramidConfig config;
  config.octaves = read_bounded(in, 8, "octave count");
  config.layers = read_bounded(in, 16, "layer count");
  const std::size_t height = read_bounded(in, 1u << 16, "height");
  const std::size_t width = read_bounded(in, 1u << 16, "width");
  const std::uint64_t base = io::read_u64(in);
  const std::uint64_t count = io::read_u64(in);
  auto pyr = make_pyramid_shell<EncryptedRational>(config, height, width, base);
  std::uint64_t seen = 0;
  for (auto& layer : pyr.layers)
    for (std::size_t r = 0; r < layer.rows; ++r)
      for (std::size_t c = 0; c < layer.cols; ++c) {
        if (!cell_has_footprint(pyr, layer, r, c)) continue;
        if (++seen > count) fail(Errc::format, "pyramid point count does not match its geometry");
        auto det = rational::read_encrypted_rational(in);
        auto trace = rational::read_encrypted_rational(in);
        layer.at(r, c).emplace(ResponsePair<EncryptedRational>{std::move(det), std::move(trace)});
      }
  if (seen != count) fail(Errc::format, "pyramid point count does not match its geometry");
  return pyr;
}

void write_encrypted_image(std::ostream& out, const EncryptedImage& img) {
  io::write_magic(out, "CSURF-IMG");
  io::write_u8(out, kVersion);
  io::write_u64(out, img.height);
  io::write_u64(out, img.width);
  io::write_u64(out, img.bound);
  for (const auto& p : img.pixels) rational::write_encrypted_rational(out, p);
  if (!out) fail(Errc::io, "failed writing encrypted image");
}

EncryptedImage read_encrypted_image(std::istream& in) {
  io::expect_magic(in, "CSURF-IMG", "encrypted image");
  if (const auto v = io::read_u8(in); v != kVersion)
    fail(Errc::format, "unsupported image format version " + std::to_string(v));
  EncryptedImage img;
  img.height = read_bounded(in, 1u << 16, "height");
  img.width = read_bounded(in, 1u << 16, "width");
  img.bound = static_cast<std::uint32_t>(read_bounded(in, 0xffffffffu, "pixel bound"));
  if (img.height == 0 || img.width == 0) fail(Errc::format, "encrypted image with empty dimension");
  img.pixels.reserve(img.height * img.width);
  for (std::size_t i = 0; i < img.height * img.width; ++i) img.pixels.push_back(rational::read_encrypted_rational(in));
  return img;
}

void write_pyramid_csv(std::ostream& out, const PlainPyramid& pyr) {
  out << "octave,layer,x,y,det_numerator,det_denominator,trace_numerator,trace_denominator,det_float,trace_float\n";
  out << std::setprecision(17);
  for (const auto& layer : pyr.layers)
    for (std::size_t r = 0; r < layer.rows; ++r)
      for (std::size_t c = 0; c < layer.cols; ++c)
        if (const auto& cell = layer.at(r, c))
          out << layer.octave << ',' << layer.layer << ',' << c * layer.step << ',' << r * layer.step << ','
              << cell->determinant.numerator << ',' << cell->determinant.denominator << ','
              << cell->trace.numerator << ',' << cell->trace.denominator << ','
              << cell->determinant.to_double() << ',' << cell->trace.to_double() << '\n';
  if (!out) fail(Errc::io, "failed writing pyramid CSV");
}

PlainPyramid read_pyramid_csv(std::istream& in, const PyramidConfig& config, std::size_t height, std::size_t width,
                              std::uint64_t base_denominator) {
  auto pyr = make_pyramid_shell<rational::PlainRational>(config, height, width, base_denominator);
  std::string line;
  if (!std::getline(in, line) ||
      line != "octave,layer,x,y,det_numerator,det_denominator,trace_numerator,trace_denominator,det_float,trace_float")
    fail(Errc::format, "pyramid CSV header missing");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream s(line);
    std::size_t o, l, x, y;
    std::int64_t dn, tn;
    std::uint64_t dd, td;
    char sep[8];
    if (!(s >> o >> sep[0] >> l >> sep[1] >> x >> sep[2] >> y >> sep[3] >> dn >> sep[4] >> dd >> sep[5] >> tn >>
          sep[6] >> td >> sep[7]))
      fail(Errc::format, "malformed pyramid CSV line " + std::to_string(lineno));
    if (o >= config.octaves || l >= config.layers)
      fail(Errc::format, "pyramid CSV line " + std::to_string(lineno) + " names a layer outside the config");
    auto& layer = pyr.layer(o, l);
    if (x % layer.step || y % layer.step || y / layer.step >= layer.rows || x / layer.step >= layer.cols ||
        !cell_has_footprint(pyr, layer, y / layer.step, x / layer.step))
      fail(Errc::format, "pyramid CSV line " + std::to_string(lineno) + " names an invalid point");
    if (dd == 0 || td == 0) fail(Errc::format, "zero denominator in pyramid CSV line " + std::to_string(lineno));
    layer.at(y / layer.step, x / layer.step)
        .emplace(ResponsePair<rational::PlainRational>{{dn, dd}, {tn, td}});
  }
  return pyr;
}

void write_pyramid_shape(std::ostream& out, const PyramidShape& shape) {
  out << "octaves=" << shape.config.octaves << "\nlayers=" << shape.config.layers << "\nheight=" << shape.height
      << "\nwidth=" << shape.width << "\nV=" << shape.base_denominator << "\n";
  if (!out) fail(Errc::io, "failed writing pyramid shape");
}

PyramidShape read_pyramid_shape(std::istream& in) {
  PyramidShape shape;
  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    std::uint64_t value = 0;
    try {
      value = std::stoull(line.substr(eq + 1));
    } catch (const std::exception&) {
      fail(Errc::format, "bad value in pyramid shape line '" + line + "'");
    }
    if (key == "octaves") shape.config.octaves = value;
    else if (key == "layers") shape.config.layers = value;
    else if (key == "height") shape.height = value;
    else if (key == "width") shape.width = value;
    else if (key == "V") shape.base_denominator = value;
    else continue;
    ++seen;
  }
  if (seen != 5) fail(Errc::format, "pyramid shape file is incomplete");
  return shape;
}

void save_encrypted_pyramid(const std::filesystem::path& path, const EncryptedPyramid& pyr) {
  auto out = io::open_output(path);
  write_encrypted_pyramid(out, pyr);
}

EncryptedPyramid load_encrypted_pyramid(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return read_encrypted_pyramid(in);
}

void save_encrypted_image(const std::filesystem::path& path, const EncryptedImage& img) {
  auto out = io::open_output(path);
  write_encrypted_image(out, img);
}

EncryptedImage load_encrypted_image(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return read_encrypted_image(in);
}

}  // namespace csurf::surf
