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

#include "csurf/surf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <string>

#include "csurf/error.hpp"
#include "csurf/util/parallel.hpp"

namespace csurf::surf {

namespace {

using fhe::Ciphertext;

constexpr std::uint64_t kImageStream = 0x696d616765;
constexpr std::uint64_t kIntegralStream = 0x696e74656772616c;

std::string location(const PyramidLayer<EncryptedRational>& layer, std::size_t r, std::size_t c) {
  return "octave=" + std::to_string(layer.octave) + " layer=" + std::to_string(layer.layer) +
         " x=" + std::to_string(c * layer.step) + " y=" + std::to_string(r * layer.step);
}

std::uint64_t sat_bound(std::uint64_t b, std::uint64_t a) { return fhe::sat_mul(b, a); }

void atomic_max(std::atomic<std::uint64_t>& slot, std::uint64_t v) {
  std::uint64_t cur = slot.load();
  while (v > cur && !slot.compare_exchange_weak(cur, v)) {
  }
}

// Lobe weights times the shared quantized unit, summed over denominator V.
EncryptedRational filter_response(const EncryptedIntegralImage& ii, std::size_t top, std::size_t left,
                                  std::span<const Lobe> lobes, std::int64_t unit, std::uint64_t v) {
  std::vector<EncryptedRational> sums;
  sums.reserve(lobes.size());
  for (const auto& lobe : lobes)
    sums.push_back(region_sum(ii, {top + lobe.rect.top, left + lobe.rect.left, top + lobe.rect.bottom,
                                   left + lobe.rect.right}));
  std::vector<rational::WeightedTerm> terms;
  terms.reserve(lobes.size());
  for (std::size_t k = 0; k < lobes.size(); ++k) terms.push_back({lobes[k].weight * unit, &sums[k]});
  return rational::weighted_sum_common_denominator(terms, v);
}

bool responses_decryptable(const EncryptedRational& det, const EncryptedRational& trace) {
  return fhe::decryptable(det.numerator()) && fhe::decryptable(trace.numerator());
}

}  // namespace

EncryptedImage encrypt_image(const fhe::PublicKey& pk, const GrayImage& img, std::uint64_t seed,
                             std::size_t workers) {
  img.validate();
  std::vector<std::optional<EncryptedRational>> slots(img.pixels.size());
  util::parallel_for(img.pixels.size(), workers, [&](std::size_t i) {
    fhe::Rng rng = fhe::make_rng(seed, kImageStream + i);
    slots[i].emplace(fhe::encrypt(pk, img.pixels[i], rng, img.bound), 1);
  });
  EncryptedImage out;
  out.height = img.height;
  out.width = img.width;
  out.bound = img.bound;
  out.pixels.reserve(slots.size());
  for (auto& s : slots) out.pixels.push_back(std::move(*s));
  return out;
}

EncryptedIntegralImage integral_image(const fhe::PublicKey& pk, const EncryptedImage& img,
                                      const RefreshPolicy& policy, std::uint64_t seed, PipelineStats* stats) {
  if (img.pixels.size() != img.height * img.width || img.pixels.empty())
    fail(Errc::invalid_argument, "encrypted image is empty or inconsistent");
  for (const auto& p : img.pixels)
    if (p.denominator() != 1) fail(Errc::invalid_argument, "integral image input must have denominator 1");

  const std::size_t rows = img.height + 1, cols = img.width + 1;
  const std::uint64_t threshold = fhe::noise_threshold(pk.params);
  fhe::Rng rng = fhe::make_rng(seed, kIntegralStream);
  auto zero = [&] { return EncryptedRational(fhe::encrypt(pk, 0, rng, 0), 1); };

  std::vector<std::optional<EncryptedRational>> grid(rows * cols);
  for (std::size_t j = 0; j < cols; ++j) grid[j] = zero();
  std::uint64_t refreshes = 0, max_noise = 0;

  for (std::size_t i = 1; i < rows; ++i) {
    grid[i * cols] = zero();
    for (std::size_t j = 1; j < cols; ++j) {
      const auto& up = *grid[(i - 1) * cols + j];
      const auto& left = *grid[i * cols + j - 1];
      const auto& diag = *grid[(i - 1) * cols + j - 1];
      Ciphertext acc = fhe::hadd(img.at(i - 1, j - 1).numerator(), up.numerator());
      acc = fhe::hsub(fhe::hadd(acc, left.numerator()), diag.numerator());
      acc = acc.with_magnitude_bound(sat_bound(img.bound, std::uint64_t{i} * j));
      const std::uint64_t noise = fhe::noise_estimate(acc);
      if (noise >= threshold)
        fail(Errc::noise_budget_exceeded,
             "integral image entry (" + std::to_string(i) + ", " + std::to_string(j) + ") reached noise " +
                 std::to_string(noise) + " >= threshold " + std::to_string(threshold) +
                 "; enable or shorten the refresh interval");
      max_noise = std::max(max_noise, noise);
      grid[i * cols + j].emplace(std::move(acc), 1);
    }
    if (policy.every_rows > 0 && policy.service != nullptr && i % policy.every_rows == 0 && i + 1 < rows) {
      for (std::size_t j = 1; j < cols; ++j) {
        auto& cell = grid[i * cols + j];
        cell.emplace(policy.service->refresh(cell->numerator()), 1);
        ++refreshes;
      }
    }
  }

  EncryptedIntegralImage out;
  out.height = img.height;
  out.width = img.width;
  out.bound = img.bound;
  out.entries.reserve(grid.size());
  for (auto& g : grid) out.entries.push_back(std::move(*g));
  if (stats) {
    stats->integral_refreshes += refreshes;
    stats->max_noise = std::max(stats->max_noise, max_noise);
  }
  return out;
}

EncryptedRational region_sum(const EncryptedIntegralImage& ii, const Rect& rect) {
  if (rect.top > rect.bottom || rect.left > rect.right || rect.bottom > ii.height || rect.right > ii.width)
    fail(Errc::out_of_bounds, "region [" + std::to_string(rect.top) + "," + std::to_string(rect.bottom) + ")x[" +
                                  std::to_string(rect.left) + "," + std::to_string(rect.right) +
                                  ") outside a " + std::to_string(ii.height) + "x" + std::to_string(ii.width) +
                                  " image");
  const auto& a = ii.at(rect.bottom, rect.right).numerator();
  const auto& b = ii.at(rect.top, rect.right).numerator();
  const auto& c = ii.at(rect.bottom, rect.left).numerator();
  const auto& d = ii.at(rect.top, rect.left).numerator();
  Ciphertext sum = fhe::hadd(fhe::hsub(fhe::hsub(a, b), c), d);
  return EncryptedRational(sum.with_magnitude_bound(sat_bound(ii.bound, rect.area())), 1);
}

std::optional<HaarResponse> haar_response(const EncryptedIntegralImage& ii, std::size_t row, std::size_t col,
                                          const FilterGeometry& geom, std::uint64_t base_denominator) {
  const auto origin = footprint_origin(row, col, geom.size, ii.height, ii.width);
  if (!origin) return std::nullopt;
  const std::int64_t unit = quantized_unit(geom.size, base_denominator);
  const auto [top, left] = *origin;
  return HaarResponse{filter_response(ii, top, left, geom.dxx, unit, base_denominator),
                      filter_response(ii, top, left, geom.dyy, unit, base_denominator),
                      filter_response(ii, top, left, geom.dxy, unit, base_denominator)};
}

EncryptedRational hessian_determinant(const HaarResponse& h) {
  const std::uint64_t v = h.dxx.denominator();
  if (h.dyy.denominator() != v || h.dxy.denominator() != v)
    fail(Errc::invalid_argument, "Haar responses must share one denominator");
  const unsigned __int128 den = static_cast<unsigned __int128>(v) * v * 100;
  const std::uint64_t q = h.dxx.numerator().params().q;
  if (den >= q - q / 2) fail(Errc::denominator_overflow, "100*V^2 reaches q/2");
  Ciphertext prod = fhe::scalar_mul(fhe::hmul(h.dxx.numerator(), h.dyy.numerator()), 100);
  Ciphertext cross = fhe::scalar_mul(fhe::hmul(h.dxy.numerator(), h.dxy.numerator()), 81);
  return EncryptedRational(fhe::hsub(prod, cross), static_cast<std::uint64_t>(den));
}

EncryptedRational hessian_trace(const HaarResponse& h) { return rational::add(h.dxx, h.dyy); }

EncryptedPyramid build_pyramid(const EncryptedIntegralImage& ii, const BuildOptions& options,
                               PipelineStats* stats) {
  if (ii.height < 9 || ii.width < 9) fail(Errc::invalid_argument, "pyramid needs an image of at least 9x9");
  const auto& params = ii.entries.front().numerator().params();
  rational::RationalParams{options.base_denominator}.validate(params.q);
  auto pyr = make_pyramid_shell<EncryptedRational>(options.config, ii.height, ii.width, options.base_denominator);

  struct Task {
    std::size_t layer, r, c;
  };
  std::vector<Task> tasks;
  std::vector<FilterGeometry> geoms;
  for (std::size_t k = 0; k < pyr.layers.size(); ++k) {
    const auto& layer = pyr.layers[k];
    geoms.push_back(filter_geometry(layer.octave, layer.layer, options.config));
    for (std::size_t r = 0; r < layer.rows; ++r)
      for (std::size_t c = 0; c < layer.cols; ++c)
        if (cell_has_footprint(pyr, layer, r, c)) tasks.push_back({k, r, c});
  }

  std::atomic<std::uint64_t> haar_refreshes{0}, max_noise{0}, may_wrap{0};
  const auto& refresh = options.refresh;
  util::parallel_for(tasks.size(), options.workers, [&](std::size_t t) {
    const auto [k, r, c] = tasks[t];
    auto& layer = pyr.layers[k];
    auto h = haar_response(ii, r * layer.step, c * layer.step, geoms[k], options.base_denominator);
    auto det = hessian_determinant(*h);
    auto trace = hessian_trace(*h);
    if (!responses_decryptable(det, trace)) {
      if (refresh.service == nullptr || !refresh.before_multiply)
        fail(Errc::noise_budget_exceeded, "response noise exceeds the threshold at " + location(layer, r, c) +
                                              " and no refresh service is available");
      h = HaarResponse{h->dxx.with_numerator(refresh.service->refresh(h->dxx.numerator())),
                       h->dyy.with_numerator(refresh.service->refresh(h->dyy.numerator())),
                       h->dxy.with_numerator(refresh.service->refresh(h->dxy.numerator()))};
      haar_refreshes += 3;
      det = hessian_determinant(*h);
      trace = hessian_trace(*h);
      if (!responses_decryptable(det, trace))
        fail(Errc::noise_budget_exceeded, "response noise exceeds the threshold after refresh at " +
                                              location(layer, r, c));
    }
    atomic_max(max_noise, std::max(fhe::noise_estimate(det.numerator()), fhe::noise_estimate(trace.numerator())));
    if (det.numerator_may_wrap() || trace.numerator_may_wrap()) ++may_wrap;
    layer.at(r, c).emplace(ResponsePair<EncryptedRational>{std::move(det), std::move(trace)});
  });

  if (stats) {
    stats->haar_refreshes += haar_refreshes.load();
    stats->max_noise = std::max(stats->max_noise, max_noise.load());
    stats->may_wrap_points += may_wrap.load();
  }
  return pyr;
}

PlainPyramid decrypt_pyramid(const fhe::SecretKey& sk, const EncryptedPyramid& pyr, std::size_t workers) {
  auto out = make_pyramid_shell<rational::PlainRational>(pyr.config, pyr.height, pyr.width, pyr.base_denominator);
  struct Task {
    std::size_t layer, cell;
  };
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < pyr.layers.size(); ++k)
    for (std::size_t i = 0; i < pyr.layers[k].cells.size(); ++i)
      if (pyr.layers[k].cells[i]) tasks.push_back({k, i});
  util::parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto [k, i] = tasks[t];
    const auto& layer = pyr.layers[k];
    const auto& cell = *layer.cells[i];
    try {
      out.layers[k].cells[i].emplace(ResponsePair<rational::PlainRational>{
          rational::decrypt_rational(sk, cell.determinant), rational::decrypt_rational(sk, cell.trace)});
    } catch (const Error& e) {
      if (e.code() != Errc::decryption_failure) throw;
      fail(Errc::decryption_failure,
           std::string(e.what()) + " at " + location(layer, i / layer.cols, i % layer.cols));
    }
  });
  return out;
}

}  // namespace csurf::surf
