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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "csurf/bounds/bounds.hpp"
#include "csurf/error.hpp"
#include "csurf/keypoints/keypoints.hpp"
#include "csurf/surf/pipeline.hpp"
#include "csurf/surf/plain_pipeline.hpp"

using namespace csurf;
using namespace csurf::keypoints;
using surf::GrayImage;

namespace {

GrayImage random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  GrayImage img(h, w);
  for (auto& p : img.pixels) p = static_cast<std::uint32_t>(g() % 256);
  return img;
}

GrayImage blob(std::size_t size, double cy, double cx, double sigma) {
  GrayImage img(size, size);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c) {
      const double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
      img.at(r, c) = static_cast<std::uint32_t>(std::lround(20 + 220 * std::exp(-d2 / (2 * sigma * sigma))));
    }
  return img;
}

// Independent scan: every cell of every inner layer against its 26 neighbours,
// reading the pyramid only through layer(o, l).at(r, c).
std::vector<Keypoint> brute_force_maxima(const FloatPyramid& p, double threshold) {
  std::vector<Keypoint> out;
  for (std::size_t o = 0; o < p.config.octaves; ++o)
    for (std::size_t l = 1; l + 1 < p.config.layers; ++l) {
      const auto& mid = p.layer(o, l);
      for (std::size_t r = 1; r + 1 < mid.rows; ++r)
        for (std::size_t c = 1; c + 1 < mid.cols; ++c) {
          if (!mid.at(r, c)) continue;
          const double v = mid.at(r, c)->determinant;
          if (v <= threshold) continue;
          int greater_or_missing = 0;
          for (std::size_t k = l - 1; k <= l + 1; ++k)
            for (std::size_t rr = r - 1; rr <= r + 1; ++rr)
              for (std::size_t cc = c - 1; cc <= c + 1; ++cc) {
                if (k == l && rr == r && cc == c) continue;
                const auto& n = p.layer(o, k).at(rr, cc);
                if (!n || n->determinant >= v) ++greater_or_missing;
              }
          if (greater_or_missing == 0)
            out.push_back({c * mid.step, r * mid.step, o, l, v, mid.at(r, c)->trace > 0 ? 1 : -1});
        }
    }
  return out;
}

FloatPyramid decrypted_mirror(const GrayImage& img, std::uint64_t V, std::uint64_t q = std::uint64_t{1} << 56) {
  const auto keys = fhe::keygen(fhe::FheParams{.q = q, .n = 10}, fhe::Backend::mirror, 1);
  const auto enc = surf::encrypt_image(keys.pub, img, 1);
  const auto ii = surf::integral_image(keys.pub, enc, {}, 1);
  return surf::to_float(surf::decrypt_pyramid(keys.secret, surf::build_pyramid(ii, {.base_denominator = V})));
}

double max_det_error(const FloatPyramid& a, const FloatPyramid& b) {
  double worst = 0;
  for (std::size_t k = 0; k < a.layers.size(); ++k)
    for (std::size_t i = 0; i < a.layers[k].cells.size(); ++i)
      if (a.layers[k].cells[i])
        worst = std::max(worst, std::abs(a.layers[k].cells[i]->determinant - b.layers[k].cells[i]->determinant));
  return worst;
}

}  // namespace

TEST(Reference, ZeroImage) {
  const auto p = reference_pyramid(GrayImage(32, 32), {});
  for (const auto& l : p.layers)
    for (const auto& c : l.cells)
      if (c) ASSERT_EQ(c->determinant, 0.0);
  EXPECT_TRUE(extract_keypoints(p, 0.0).empty());
}

TEST(Reference, UsesExactConstants) {
  // one bright pixel inside the centre lobe of a 9x9 Dxx: -2 * 200 / 81
  GrayImage img(9, 9);
  img.at(4, 4) = 200;
  const auto ii = surf::plain_integral_image(img);
  const auto h = reference_haar(ii, 9, 0, 0, surf::filter_geometry(0, 0));
  EXPECT_DOUBLE_EQ(h.dxx, -400.0 / 81.0);
  EXPECT_DOUBLE_EQ(h.dyy, -400.0 / 81.0);
  EXPECT_DOUBLE_EQ(h.dxy, 0.0);
}

TEST(Reference, DecryptedWithinErrorBound) {
  const auto img = random_image(32, 32, 11);
  const auto ref = reference_pyramid(img, {});
  const auto enc = decrypted_mirror(img, 10000);
  const auto bound = error_bound_pyramid(img, {}, 10000);
  const auto worst = bounds::worst_case_error_bound(1.0 / 20000, 255, 32, 32);
  std::size_t points = 0;
  for (std::size_t k = 0; k < ref.layers.size(); ++k)
    for (std::size_t i = 0; i < ref.layers[k].cells.size(); ++i) {
      const auto& r = ref.layers[k].cells[i];
      if (!r) continue;
      const auto& e = *enc.layers[k].cells[i];
      const auto& b = *bound.layers[k].cells[i];
      ASSERT_LE(std::abs(e.determinant - r->determinant), b.determinant);
      ASSERT_LE(std::abs(e.trace - r->trace), b.trace);
      ASSERT_LE(b.determinant, worst.determinant);
      ++points;
    }
  EXPECT_GT(points, 100u);
}

TEST(Reference, ErrorShrinksAsVGrows) {
  const auto img = random_image(32, 32, 12);
  const auto ref = reference_pyramid(img, {});
  const std::uint64_t q = std::uint64_t{1} << 63;
  const double e100 = max_det_error(decrypted_mirror(img, 100, q), ref);
  const double e10k = max_det_error(decrypted_mirror(img, 10000, q), ref);
  const double e1m = max_det_error(decrypted_mirror(img, 1000000, q), ref);
  EXPECT_GT(e100, e10k);
  EXPECT_GT(e10k, e1m);
}

TEST(Extract, EmptyCases) {
  const auto p = reference_pyramid(random_image(48, 48, 1), {});
  EXPECT_TRUE(extract_keypoints(p, std::numeric_limits<double>::infinity()).empty());
  const auto two = reference_pyramid(random_image(32, 32, 1), {.octaves = 1, .layers = 2});
  EXPECT_THROW(extract_keypoints(two, 0.0), Error);
}

TEST(Extract, SingleBlobGivesOneKeypointAtCentre) {
  const auto img = blob(64, 32, 32, 3.0);
  const auto p = reference_pyramid(img, {});
  double peak = 0;
  for (const auto& l : p.layers)
    for (const auto& c : l.cells)
      if (c) peak = std::max(peak, c->determinant);
  const auto kps = extract_keypoints(p, 0.5 * peak);
  ASSERT_EQ(kps.size(), 1u);
  EXPECT_EQ(kps[0].x, 32u);
  EXPECT_EQ(kps[0].y, 32u);
  EXPECT_EQ(kps[0].laplacian_sign, -1);  // bright blob
  EXPECT_EQ(kps, brute_force_maxima(p, 0.5 * peak));
}

TEST(Extract, MatchesBruteForceScan) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = reference_pyramid(random_image(64, 64, seed), {});
    for (double t : {0.0, 5.0, 50.0}) ASSERT_EQ(extract_keypoints(p, t), brute_force_maxima(p, t));
  }
}

TEST(Extract, TiesAreNotMaxima) {
  const auto p = reference_pyramid(GrayImage(40, 40, 255, 100), {});
  EXPECT_TRUE(extract_keypoints(p, -1.0).empty());
}

TEST(Extract, DeterministicAndMonotoneInThreshold) {
  const auto p = reference_pyramid(random_image(64, 64, 7), {});
  EXPECT_EQ(extract_keypoints(p, 3.0), extract_keypoints(p, 3.0));
  std::size_t prev = std::numeric_limits<std::size_t>::max();
  for (double t = 0; t < 500; t += 25) {
    const auto kps = extract_keypoints(p, t);
    ASSERT_LE(kps.size(), prev);
    for (const auto& k : kps) ASSERT_GT(k.response, t);
    prev = kps.size();
  }
}

TEST(Compare, IdentityAndEmpty) {
  const auto kps = extract_keypoints(reference_pyramid(random_image(64, 64, 3), {}), 5.0);
  ASSERT_FALSE(kps.empty());
  const auto self = compare_keypoints(kps, kps);
  EXPECT_EQ(self.matched, kps.size());
  EXPECT_DOUBLE_EQ(self.agreement(), 1.0);
  const auto none = compare_keypoints({}, {});
  EXPECT_EQ(none.matched, 0u);
  EXPECT_EQ(none.reference_count, 0u);
  EXPECT_DOUBLE_EQ(none.agreement(), 1.0);
}

TEST(Compare, RadiusOctaveAndGreedyOrder) {
  const std::vector<Keypoint> ref{{10, 10, 0, 1, 1, 1}, {20, 20, 0, 1, 1, 1}, {30, 30, 1, 1, 1, 1}};
  const std::vector<Keypoint> enc{{11, 11, 0, 1, 1, 1}, {23, 20, 0, 1, 1, 1}, {30, 30, 0, 1, 1, 1},
                                  {10, 11, 0, 2, 1, 1}};
  const auto s = compare_keypoints(ref, enc, 2.0);
  EXPECT_EQ(s.matched, 1u);  // (10,10) takes the closer (10,11); (20,20)-(23,20) is 3 px; octaves differ at 30
  EXPECT_EQ(s.unmatched_reference, 2u);
  EXPECT_EQ(s.unmatched_encrypted, 3u);
  EXPECT_DOUBLE_EQ(s.agreement(), 1.0 / 4.0);
  EXPECT_EQ(compare_keypoints(ref, enc, 3.0).matched, 2u);
}

TEST(CorpusStats, ElevenImageCountTotals) {
  const std::size_t plain[] = {22, 16, 15, 22, 22, 22, 7, 0, 1, 25, 19};
  const std::size_t enc[] = {19, 14, 11, 19, 19, 22, 8, 0, 2, 20, 17};
  CorpusStats cs;
  for (int i = 0; i < 11; ++i) {
    ComparisonStats s;
    s.reference_count = plain[i];
    s.encrypted_count = enc[i];
    s.matched = std::min(plain[i], enc[i]);
    cs.add(s);
  }
  EXPECT_EQ(cs.reference_total, 171u);
  EXPECT_EQ(cs.encrypted_total, 151u);
  EXPECT_NEAR(cs.totals_ratio(), 0.883, 5e-4);
  EXPECT_EQ(cs.exact_count_images, 2u);
  EXPECT_LE(cs.agreement(), 1.0);
  EXPECT_NE(cs.key_values().find("totals_ratio="), std::string::npos);
}

TEST(IntensityMap, ZeroBlobAndBounds) {
  const auto zero = reference_pyramid(GrayImage(32, 32), {});
  std::stringstream z;
  write_intensity_map(z, zero, zero, 0, 1, 16, 16, 2);
  std::string line;
  std::getline(z, line);
  EXPECT_EQ(line, "source,octave,layer,row_offset,col_offset,x,y,response");
  std::size_t rows = 0;
  while (std::getline(z, line)) {
    ++rows;
    ASSERT_EQ(line.substr(line.rfind(',') + 1), "0");
  }
  EXPECT_EQ(rows, 2u * 2u * 25u);  // two sources, layer and the one below

  const auto img = blob(64, 32, 32, 3.0);
  const auto p = reference_pyramid(img, {});
  std::stringstream b;
  write_intensity_map(b, p, p, 0, 1, 32, 32, 1);
  std::getline(b, line);
  double best = -1e300;
  std::string best_offsets;
  while (std::getline(b, line)) {
    if (line.rfind("reference,0,1,", 0) != 0) continue;
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    if (v > best) {
      best = v;
      best_offsets = line.substr(14, 4);
    }
  }
  EXPECT_EQ(best_offsets, "0,0,");
  std::stringstream sink;
  EXPECT_THROW(write_intensity_map(sink, p, p, 0, 1, 1, 32, 2), Error);
}

TEST(Diagnose, ThresholdFlipIsExplained) {
  // Build two pyramids that differ at a single cell.
  const auto img = blob(64, 32, 32, 3.0);
  const auto ref = reference_pyramid(img, {});
  auto enc = ref;
  auto bound = ref;
  for (auto& l : bound.layers)
    for (auto& c : l.cells)
      if (c) c->determinant = 1.0;
  const auto kps = extract_keypoints(ref, 0.0);
  ASSERT_FALSE(kps.empty());
  const auto& k = kps[0];
  const double v = k.response;
  const std::size_t step = ref.layer(k.octave, k.layer).step;
  enc.layer(k.octave, k.layer).at(k.y / step, k.x / step)->determinant = v - 0.5;
  const double t = v - 0.25;
  const auto rk = extract_keypoints(ref, t), ek = extract_keypoints(enc, t);
  const auto stats = compare_keypoints(rk, ek);
  ASSERT_EQ(stats.unmatched_reference, 1u);
  const auto ties = diagnose_disagreements(ref, enc, bound, rk, ek, stats, t);
  ASSERT_GE(ties.size(), 1u);
  EXPECT_TRUE(ties[0].from_reference);
  EXPECT_EQ(ties[0].rival, "threshold");
  EXPECT_TRUE(ties[0].explained);
  EXPECT_NEAR(ties[0].reference_margin, 0.25, 1e-9);
  EXPECT_NEAR(ties[0].observed_error, 0.5, 1e-9);

  // Same flip but a bound smaller than the observed error is not explained.
  for (auto& l : bound.layers)
    for (auto& c : l.cells)
      if (c) c->determinant = 0.1;
  EXPECT_FALSE(diagnose_disagreements(ref, enc, bound, rk, ek, stats, t)[0].explained);
}

TEST(KeypointCsv, RoundTrip) {
  const std::vector<Keypoint> kps{{4, 8, 0, 1, 12.5, 1}, {16, 2, 1, 2, -0.25, -1}};
  std::stringstream buf;
  write_keypoints_csv(buf, kps);
  EXPECT_EQ(read_keypoints_csv(buf), kps);
  std::stringstream bad("x,y\n");
  EXPECT_THROW(read_keypoints_csv(bad), Error);
}
