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

#include "csurf/surf/plain_pipeline.hpp"

#include "csurf/error.hpp"

namespace csurf::surf {

namespace {

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Errc::numerator_overflow, "plain pipeline numerator overflow");
  return r;
}

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(Errc::numerator_overflow, "plain pipeline numerator overflow");
  return r;
}

template <std::size_t K>
std::int64_t lobe_sum(const std::vector<std::int64_t>& ii, std::size_t width, std::size_t top, std::size_t left,
                      const std::array<Lobe, K>& lobes, std::int64_t unit) {
  const std::size_t stride = width + 1;
  std::int64_t acc = 0;
  for (const auto& lobe : lobes) {
    const std::size_t t = top + lobe.rect.top, b = top + lobe.rect.bottom;
    const std::size_t l = left + lobe.rect.left, r = left + lobe.rect.right;
    const std::int64_t rs = ii[b * stride + r] - ii[t * stride + r] - ii[b * stride + l] + ii[t * stride + l];
    acc = add(acc, mul(mul(lobe.weight, unit), rs));
  }
  return acc;
}

}  // namespace

std::vector<std::int64_t> plain_integral_image(const GrayImage& img) {
  img.validate();
  const std::size_t stride = img.width + 1;
  std::vector<std::int64_t> ii((img.height + 1) * stride, 0);
  for (std::size_t i = 1; i <= img.height; ++i)
    for (std::size_t j = 1; j <= img.width; ++j)
      ii[i * stride + j] = img.at(i - 1, j - 1) + ii[(i - 1) * stride + j] + ii[i * stride + j - 1] -
                           ii[(i - 1) * stride + j - 1];
  return ii;
}

PlainHaar plain_haar(const std::vector<std::int64_t>& integral, std::size_t width, std::size_t top,
                     std::size_t left, const FilterGeometry& geom, std::uint64_t base_denominator) {
  const std::int64_t unit = quantized_unit(geom.size, base_denominator);
  return {lobe_sum(integral, width, top, left, geom.dxx, unit), lobe_sum(integral, width, top, left, geom.dyy, unit),
          lobe_sum(integral, width, top, left, geom.dxy, unit)};
}

PlainPyramid plain_pyramid(const GrayImage& img, const PyramidConfig& config, std::uint64_t base_denominator) {
  if (base_denominator == 0) fail(Errc::invalid_params, "base denominator V must be at least 1");
  if (img.height < 9 || img.width < 9) fail(Errc::invalid_argument, "pyramid needs an image of at least 9x9");
  if (base_denominator > 300000000ull) fail(Errc::denominator_overflow, "100*V^2 exceeds 64 bits");
  const auto ii = plain_integral_image(img);
  const auto v = static_cast<std::int64_t>(base_denominator);
  const std::uint64_t det_den = 100 * base_denominator * base_denominator;
  const std::uint64_t trace_den = base_denominator * base_denominator;

  auto pyr = make_pyramid_shell<rational::PlainRational>(config, img.height, img.width, base_denominator);
  for (auto& layer : pyr.layers) {
    const auto geom = filter_geometry(layer.octave, layer.layer, config);
    for (std::size_t r = 0; r < layer.rows; ++r)
      for (std::size_t c = 0; c < layer.cols; ++c) {
        const auto origin = footprint_origin(r * layer.step, c * layer.step, geom.size, img.height, img.width);
        if (!origin) continue;
        const auto h = plain_haar(ii, img.width, (*origin)[0], (*origin)[1], geom, base_denominator);
        const std::int64_t det = add(mul(100, mul(h.dxx, h.dyy)), -mul(81, mul(h.dxy, h.dxy)));
        const std::int64_t trace = add(mul(h.dxx, v), mul(h.dyy, v));
        layer.at(r, c).emplace(ResponsePair<rational::PlainRational>{{det, det_den}, {trace, trace_den}});
      }
  }
  return pyr;
}

}  // namespace csurf::surf
