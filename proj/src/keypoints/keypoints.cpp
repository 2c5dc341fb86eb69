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

#include "csurf/keypoints/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <tuple>

#include "csurf/bounds/bounds.hpp"
#include "csurf/error.hpp"
#include "csurf/surf/plain_pipeline.hpp"

namespace csurf::keypoints {

namespace {

using surf::PyramidLayer;
using Layer = PyramidLayer<double>;

template <std::size_t K>
double weighted_lobes(const std::vector<std::int64_t>& ii, std::size_t width, std::size_t top, std::size_t left,
                      const std::array<surf::Lobe, K>& lobes, double inv_area) {
  const std::size_t stride = width + 1;
  double acc = 0;
  for (const auto& lobe : lobes) {
    const std::size_t t = top + lobe.rect.top, b = top + lobe.rect.bottom;
    const std::size_t l = left + lobe.rect.left, r = left + lobe.rect.right;
    const std::int64_t rs = ii[b * stride + r] - ii[t * stride + r] - ii[b * stride + l] + ii[t * stride + l];
    acc += static_cast<double>(lobe.weight) * inv_area * static_cast<double>(rs);
  }
  return acc;
}

template <class Fn>
FloatPyramid per_point(const GrayImage& img, const PyramidConfig& config, Fn&& fn) {
  const auto ii = surf::plain_integral_image(img);
  auto pyr = surf::make_pyramid_shell<double>(config, img.height, img.width, 0);
  for (auto& layer : pyr.layers) {
    const auto geom = surf::filter_geometry(layer.octave, layer.layer, config);
    for (std::size_t r = 0; r < layer.rows; ++r)
      for (std::size_t c = 0; c < layer.cols; ++c) {
        const auto origin =
            surf::footprint_origin(r * layer.step, c * layer.step, geom.size, img.height, img.width);
        if (!origin) continue;
        const auto h = reference_haar(ii, img.width, (*origin)[0], (*origin)[1], geom);
        layer.at(r, c).emplace(fn(h));
      }
  }
  return pyr;
}

const std::optional<surf::ResponsePair<double>>* cell(const FloatPyramid& p, std::size_t o, std::size_t l,
                                                      long r, long c) {
  if (l >= p.config.layers || r < 0 || c < 0) return nullptr;
  const auto& layer = p.layer(o, l);
  if (static_cast<std::size_t>(r) >= layer.rows || static_cast<std::size_t>(c) >= layer.cols) return nullptr;
  return &layer.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

struct Rival {
  bool is_threshold = true;
  std::size_t layer = 0;
  long r = 0, c = 0;
};

// Why does `p` not report a keypoint at (o, l, r, c)? Empty if it does.
std::optional<Rival> rejection(const FloatPyramid& p, std::size_t o, std::size_t l, long r, long c, double threshold) {
  const double v = (*cell(p, o, l, r, c))->determinant;
  if (!(v > threshold)) return Rival{};
  std::optional<Rival> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t dl = 0; dl < 3; ++dl)
    for (long dr = -1; dr <= 1; ++dr)
      for (long dc = -1; dc <= 1; ++dc) {
        const std::size_t nl = l + dl - 1;
        if (dl == 1 && dr == 0 && dc == 0) continue;
        const auto* n = cell(p, o, nl, r + dr, c + dc);
        if (n == nullptr || !*n) continue;
        if ((*n)->determinant >= v && (*n)->determinant > best_value) {
          best_value = (*n)->determinant;
          best = Rival{false, nl, r + dr, c + dc};
        }
      }
  return best;
}

}  // namespace

ReferenceHaar reference_haar(const std::vector<std::int64_t>& integral, std::size_t width, std::size_t top,
                             std::size_t left, const surf::FilterGeometry& geom) {
  const double inv = 1.0 / static_cast<double>(geom.normalization_area());
  return {weighted_lobes(integral, width, top, left, geom.dxx, inv),
          weighted_lobes(integral, width, top, left, geom.dyy, inv),
          weighted_lobes(integral, width, top, left, geom.dxy, inv)};
}

FloatPyramid reference_pyramid(const GrayImage& img, const PyramidConfig& config) {
  return per_point(img, config, [](const ReferenceHaar& h) {
    return surf::ResponsePair<double>{h.dxx * h.dyy - 0.81 * h.dxy * h.dxy, h.dxx + h.dyy};
  });
}

FloatPyramid error_bound_pyramid(const GrayImage& img, const PyramidConfig& config, std::uint64_t base_denominator) {
  if (base_denominator == 0) fail(Errc::invalid_params, "V must be positive");
  const double delta = 1.0 / (2.0 * static_cast<double>(base_denominator));
  return per_point(img, config, [&](const ReferenceHaar& h) {
    const auto b = bounds::error_bound(delta, img.bound, img.height, img.width, h.dxx, h.dyy, h.dxy);
    return surf::ResponsePair<double>{b.determinant, b.trace};
  });
}

std::vector<Keypoint> extract_keypoints(const FloatPyramid& pyr, double threshold) {
  if (pyr.config.layers < 3) fail(Errc::invalid_argument, "keypoint extraction needs at least three layers");
  std::vector<Keypoint> out;
  for (std::size_t o = 0; o < pyr.config.octaves; ++o)
    for (std::size_t l = 1; l + 1 < pyr.config.layers; ++l) {
      const auto& layer = pyr.layer(o, l);
      for (std::size_t r = 0; r < layer.rows; ++r)
        for (std::size_t c = 0; c < layer.cols; ++c) {
          const auto& centre = layer.at(r, c);
          if (!centre || !(centre->determinant > threshold)) continue;
          bool is_max = true;
          for (std::size_t dl = 0; dl < 3 && is_max; ++dl)
            for (long dr = -1; dr <= 1 && is_max; ++dr)
              for (long dc = -1; dc <= 1 && is_max; ++dc) {
                if (dl == 1 && dr == 0 && dc == 0) continue;
                const auto* n = cell(pyr, o, l + dl - 1, long(r) + dr, long(c) + dc);
                if (n == nullptr || !*n || !((*n)->determinant < centre->determinant)) is_max = false;
              }
          if (!is_max) continue;
          out.push_back({c * layer.step, r * layer.step, o, l, centre->determinant,
                         centre->trace > 0 ? 1 : (centre->trace < 0 ? -1 : 0)});
        }
    }
  return out;
}

double ComparisonStats::agreement() const noexcept {
  const std::size_t denom = std::max(reference_count, encrypted_count);
  return denom == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(denom);
}

ComparisonStats compare_keypoints(const std::vector<Keypoint>& reference, const std::vector<Keypoint>& encrypted,
                                  double radius) {
  struct Pair {
    double dist;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < reference.size(); ++i)
    for (std::size_t j = 0; j < encrypted.size(); ++j) {
      if (reference[i].octave != encrypted[j].octave) continue;
      const double dx = double(reference[i].x) - double(encrypted[j].x);
      const double dy = double(reference[i].y) - double(encrypted[j].y);
      const double d = std::hypot(dx, dy);
      if (d <= radius) pairs.push_back({d, i, j});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.dist, a.i, a.j) < std::tie(b.dist, b.i, b.j);
  });
  std::vector<bool> used_ref(reference.size()), used_enc(encrypted.size());
  ComparisonStats s;
  s.reference_count = reference.size();
  s.encrypted_count = encrypted.size();
  for (const auto& p : pairs) {
    if (used_ref[p.i] || used_enc[p.j]) continue;
    used_ref[p.i] = used_enc[p.j] = true;
    ++s.matched;
  }
  for (std::size_t i = 0; i < reference.size(); ++i)
    if (!used_ref[i]) s.unmatched_reference_indices.push_back(i);
  for (std::size_t j = 0; j < encrypted.size(); ++j)
    if (!used_enc[j]) s.unmatched_encrypted_indices.push_back(j);
  s.unmatched_reference = s.unmatched_reference_indices.size();
  s.unmatched_encrypted = s.unmatched_encrypted_indices.size();
  return s;
}

void CorpusStats::add(const ComparisonStats& s) {
  ++images;
  reference_total += s.reference_count;
  encrypted_total += s.encrypted_count;
  matched_total += s.matched;
  max_total += std::max(s.reference_count, s.encrypted_count);
  exact_count_images += s.reference_count == s.encrypted_count;
}

double CorpusStats::agreement() const noexcept {
  return max_total == 0 ? 1.0 : static_cast<double>(matched_total) / static_cast<double>(max_total);
}

double CorpusStats::recall() const noexcept {
  return reference_total == 0 ? 1.0 : static_cast<double>(matched_total) / static_cast<double>(reference_total);
}

double CorpusStats::totals_ratio() const noexcept {
  return reference_total == 0 ? 1.0 : static_cast<double>(encrypted_total) / static_cast<double>(reference_total);
}

std::string CorpusStats::key_values() const {
  std::ostringstream s;
  s << "images=" << images << "\nreference_total=" << reference_total << "\nencrypted_total=" << encrypted_total
    << "\nmatched_total=" << matched_total << "\nexact_count_images=" << exact_count_images
    << "\nagreement=" << agreement() << "\nrecall=" << recall() << "\ntotals_ratio=" << totals_ratio() << "\n";
  return s.str();
}

std::string to_key_values(const ComparisonStats& s) {
  std::ostringstream out;
  out << "reference_count=" << s.reference_count << "\nencrypted_count=" << s.encrypted_count
      << "\nmatched=" << s.matched << "\nunmatched_reference=" << s.unmatched_reference
      << "\nunmatched_encrypted=" << s.unmatched_encrypted << "\nagreement=" << s.agreement() << "\n";
  return out.str();
}

void write_intensity_map(std::ostream& out, const FloatPyramid& reference, const FloatPyramid& encrypted,
                         std::size_t octave, std::size_t layer, std::size_t cx, std::size_t cy, std::size_t radius) {
  const auto& ref_layer = reference.layer(octave, layer);
  const long r0 = long(cy / ref_layer.step), c0 = long(cx / ref_layer.step), rad = long(radius);
  if (r0 - rad < 0 || c0 - rad < 0 || r0 + rad >= long(ref_layer.rows) || c0 + rad >= long(ref_layer.cols))
    fail(Errc::out_of_bounds, "intensity window of radius " + std::to_string(radius) + " around (" +
                                  std::to_string(cx) + ", " + std::to_string(cy) + ") leaves the sample grid");
  out << "source,octave,layer,row_offset,col_offset,x,y,response\n" << std::setprecision(17);
  const std::size_t first = layer == 0 ? 0 : layer - 1;
  for (const auto* src : {&reference, &encrypted})
    for (std::size_t l = first; l <= layer; ++l)
      for (long dr = -rad; dr <= rad; ++dr)
        for (long dc = -rad; dc <= rad; ++dc) {
          const auto& lay = src->layer(octave, l);
          const auto& v = lay.at(std::size_t(r0 + dr), std::size_t(c0 + dc));
          out << (src == &reference ? "reference" : "encrypted") << ',' << octave << ',' << l << ',' << dr << ','
              << dc << ',' << (c0 + dc) * long(lay.step) << ',' << (r0 + dr) * long(lay.step) << ',';
          if (v) out << v->determinant;
          out << '\n';
        }
}

std::vector<NearTie> diagnose_disagreements(const FloatPyramid& reference, const FloatPyramid& encrypted,
                                            const FloatPyramid& bounds, const std::vector<Keypoint>& ref_kps,
                                            const std::vector<Keypoint>& enc_kps, const ComparisonStats& stats,
                                            double threshold) {
  std::vector<NearTie> out;
  auto value = [](const FloatPyramid& p, std::size_t o, std::size_t l, long r, long c) {
    return (*cell(p, o, l, r, c))->determinant;
  };
  auto diagnose = [&](const Keypoint& kp, bool from_reference) {
    const FloatPyramid& other = from_reference ? encrypted : reference;
    const auto& layer = reference.layer(kp.octave, kp.layer);
    const long r = long(kp.y / layer.step), c = long(kp.x / layer.step);
    const std::size_t o = kp.octave, l = kp.layer;
    NearTie t;
    t.keypoint = kp;
    t.from_reference = from_reference;
    const double a_ref = value(reference, o, l, r, c), a_enc = value(encrypted, o, l, r, c);
    t.observed_error = std::abs(a_enc - a_ref);
    t.error_bound = value(bounds, o, l, r, c);
    const auto why = rejection(other, o, l, r, c, threshold);
    if (!why) {
      t.rival = "matching";
      out.push_back(t);
      return;
    }
    if (why->is_threshold) {
      t.rival = "threshold";
      t.reference_margin = std::abs(a_ref - threshold);
    } else {
      const auto& rl = reference.layer(o, why->layer);
      t.rival = std::to_string(why->c * long(rl.step)) + "," + std::to_string(why->r * long(rl.step)) + "," +
                std::to_string(why->layer);
      const double n_ref = value(reference, o, why->layer, why->r, why->c);
      const double n_enc = value(encrypted, o, why->layer, why->r, why->c);
      t.reference_margin = std::abs(a_ref - n_ref);
      t.observed_error += std::abs(n_enc - n_ref);
      t.error_bound += value(bounds, o, why->layer, why->r, why->c);
    }
    t.relative_margin = t.reference_margin / std::max(std::abs(a_ref), std::numeric_limits<double>::min());
    // The observed error must cover the margin for the order to flip.
    const double slack = 1e-9 * std::max(1.0, std::abs(a_ref));
    t.explained = t.reference_margin <= t.observed_error + slack && t.observed_error <= t.error_bound + slack;
    out.push_back(t);
  };
  for (const auto i : stats.unmatched_reference_indices) diagnose(ref_kps[i], true);
  for (const auto j : stats.unmatched_encrypted_indices) diagnose(enc_kps[j], false);
  return out;
}

void write_keypoints_csv(std::ostream& out, const std::vector<Keypoint>& kps) {
  out << "x,y,octave,layer,response,laplacian_sign\n" << std::setprecision(17);
  for (const auto& k : kps)
    out << k.x << ',' << k.y << ',' << k.octave << ',' << k.layer << ',' << k.response << ',' << k.laplacian_sign
        << '\n';
  if (!out) fail(Errc::io, "failed writing keypoint CSV");
}

std::vector<Keypoint> read_keypoints_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y,octave,layer,response,laplacian_sign")
    fail(Errc::format, "keypoint CSV header missing");
  std::vector<Keypoint> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream s(line);
    Keypoint k;
    char c1, c2, c3, c4, c5;
    if (!(s >> k.x >> c1 >> k.y >> c2 >> k.octave >> c3 >> k.layer >> c4 >> k.response >> c5 >> k.laplacian_sign) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',' || c5 != ',')
      fail(Errc::format, "malformed keypoint CSV line " + std::to_string(lineno));
    out.push_back(k);
  }
  return out;
}

}  // namespace csurf::keypoints
