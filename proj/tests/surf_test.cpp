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

#include <chrono>
#include <random>
#include <sstream>

#include "csurf/error.hpp"
#include "csurf/fhe/refresh.hpp"
#include "csurf/surf/pipeline.hpp"
#include "csurf/surf/plain_pipeline.hpp"
#include "csurf/surf/pyramid_io.hpp"

using namespace csurf;
using namespace csurf::surf;
using fhe::Backend;
using fhe::FheParams;
using rational::PlainRational;

namespace {

const fhe::KeyPair& mirror_keys() {
  static const fhe::KeyPair k = fhe::keygen(FheParams::toy(), Backend::mirror, 5);
  return k;
}

const fhe::KeyPair& gsw_keys() {
  static const fhe::KeyPair k = fhe::keygen(FheParams::toy(), Backend::gsw, 5);
  return k;
}

GrayImage random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  GrayImage img(h, w);
  for (auto& p : img.pixels) p = static_cast<std::uint32_t>(g() % 256);
  return img;
}

// Brute-force box sum over [t,b) x [l,r).
std::int64_t box_sum(const GrayImage& img, std::size_t t, std::size_t l, std::size_t b, std::size_t r) {
  std::int64_t s = 0;
  for (std::size_t i = t; i < b; ++i)
    for (std::size_t j = l; j < r; ++j) s += img.at(i, j);
  return s;
}

EncryptedIntegralImage mirror_integral(const GrayImage& img) {
  return integral_image(mirror_keys().pub, encrypt_image(mirror_keys().pub, img, 1), RefreshPolicy::disabled(), 2);
}

PlainRational dec(const EncryptedRational& r, const fhe::KeyPair& k = mirror_keys()) {
  return rational::decrypt_rational(k.secret, r);
}

EncryptedRational enc_frac(std::int64_t u, std::uint64_t v, const fhe::KeyPair& k = mirror_keys()) {
  static fhe::Rng rng = fhe::make_rng(44);
  return EncryptedRational(fhe::encrypt(k.pub, u, rng), v);
}

void expect_same(const PlainPyramid& a, const PlainPyramid& b) {
  ASSERT_EQ(a.layers.size(), b.layers.size());
  for (std::size_t k = 0; k < a.layers.size(); ++k) {
    ASSERT_EQ(a.layers[k].cells.size(), b.layers[k].cells.size());
    for (std::size_t i = 0; i < a.layers[k].cells.size(); ++i) {
      const auto &x = a.layers[k].cells[i], &y = b.layers[k].cells[i];
      ASSERT_EQ(x.has_value(), y.has_value()) << "layer " << k << " cell " << i;
      if (!x) continue;
      ASSERT_EQ(x->determinant, y->determinant) << "layer " << k << " cell " << i;
      ASSERT_EQ(x->trace, y->trace) << "layer " << k << " cell " << i;
    }
  }
}

}  // namespace

TEST(Pgm, RoundTripAndComments) {
  const auto img = random_image(5, 7, 1);
  std::stringstream buf;
  write_pgm(buf, img);
  const auto back = read_pgm(buf);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(back.width, 7u);
  EXPECT_EQ(back.height, 5u);

  std::stringstream commented(std::string("P5\n# a comment\n2 1\n# another\n255\n") + '\x07' + '\xff');
  const auto c = read_pgm(commented);
  EXPECT_EQ(c.pixels, (std::vector<std::uint32_t>{7, 255}));
}

TEST(Pgm, RejectsUnsupported) {
  std::stringstream deep("P5\n2 2\n65535\n");
  EXPECT_THROW(read_pgm(deep), Error);
  std::stringstream ascii("P2\n1 1\n255\n0\n");
  EXPECT_THROW(read_pgm(ascii), Error);
  std::stringstream truncated("P5\n4 4\n255\nab");
  try {
    read_pgm(truncated);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::format);
  }
}

TEST(EncryptImage, PixelWise) {
  GrayImage img(2, 2);
  img.pixels = {0, 1, 2, 3};
  for (const auto* keys : {&mirror_keys(), &gsw_keys()}) {
    const auto enc = encrypt_image(keys->pub, img, 3);
    ASSERT_EQ(enc.pixels.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(dec(enc.pixels[i], *keys), (PlainRational{std::int64_t(i), 1}));
  }
  GrayImage bad(1, 1, 10, 11);
  EXPECT_THROW(encrypt_image(mirror_keys().pub, bad, 1), Error);
}

TEST(IntegralImage, AllOnesClosedForm) {
  const auto ii = mirror_integral(GrayImage(6, 9, 255, 1));
  for (std::size_t i = 0; i <= 6; ++i)
    for (std::size_t j = 0; j <= 9; ++j) ASSERT_EQ(dec(ii.at(i, j)), (PlainRational{std::int64_t(i * j), 1}));
}

TEST(IntegralImage, MatchesBruteForceOnBothBackends) {
  const auto img = random_image(8, 8, 9);
  fhe::KeyholderRefresh service(gsw_keys(), 1);
  const RefreshPolicy policy{.every_rows = 3, .service = &service};
  PipelineStats stats;
  const auto gsw = integral_image(gsw_keys().pub, encrypt_image(gsw_keys().pub, img, 4), policy, 5, &stats);
  const auto mirror = mirror_integral(img);
  for (std::size_t i = 0; i <= 8; ++i)
    for (std::size_t j = 0; j <= 8; ++j) {
      const PlainRational want{box_sum(img, 0, 0, i, j), 1};
      ASSERT_EQ(dec(mirror.at(i, j)), want);
      ASSERT_EQ(dec(gsw.at(i, j), gsw_keys()), want);
    }
  EXPECT_EQ(stats.integral_refreshes, 2u * 8u);  // rows 3 and 6
  EXPECT_EQ(service.refresh_count(), 16u);
}

TEST(IntegralImage, UnrefreshedNoiseIsReported) {
  const FheParams small{.q = std::uint64_t{1} << 40, .n = 4};
  const auto keys = fhe::keygen(small, Backend::gsw, 3);
  const auto img = random_image(16, 16, 2);
  try {
    integral_image(keys.pub, encrypt_image(keys.pub, img, 1), RefreshPolicy::disabled(), 1);
    FAIL() << "expected noise budget error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::noise_budget_exceeded);
  }
  fhe::KeyholderRefresh service(keys, 2);
  const auto ii = integral_image(keys.pub, encrypt_image(keys.pub, img, 1), {.every_rows = 2, .service = &service}, 1);
  EXPECT_EQ(dec(ii.at(16, 16), keys), (PlainRational{box_sum(img, 0, 0, 16, 16), 1}));
}

TEST(RegionSum, Examples) {
  const auto ones = mirror_integral(GrayImage(7, 5, 255, 1));
  EXPECT_EQ(dec(region_sum(ones, {0, 0, 7, 5})), (PlainRational{35, 1}));
  EXPECT_EQ(dec(region_sum(ones, {3, 2, 3, 2})), (PlainRational{0, 1}));
  EXPECT_THROW(region_sum(ones, {0, 0, 8, 5}), Error);
  EXPECT_THROW(region_sum(ones, {4, 0, 3, 5}), Error);
}

TEST(RegionSum, RandomRectanglesMatchBoxSums) {
  const auto img = random_image(12, 10, 21);
  const auto ii = mirror_integral(img);
  std::mt19937_64 g(3);
  for (int k = 0; k < 200; ++k) {
    std::size_t t = g() % 13, b = g() % 13, l = g() % 11, r = g() % 11;
    if (t > b) std::swap(t, b);
    if (l > r) std::swap(l, r);
    const auto rs = region_sum(ii, {t, l, b, r});
    ASSERT_EQ(dec(rs), (PlainRational{box_sum(img, t, l, b, r), 1}));
    ASSERT_EQ(rs.numerator().magnitude_bound(), 255u * (b - t) * (r - l));
  }
}

TEST(FilterGeometry, SmallestFilterMatchesSurfTemplate) {
  // 9x9 template as (x1, y1, x2, y2, weight), x = column.
  const int dx[3][5] = {{0, 2, 3, 7, 1}, {3, 2, 6, 7, -2}, {6, 2, 9, 7, 1}};
  const int dy[3][5] = {{2, 0, 7, 3, 1}, {2, 3, 7, 6, -2}, {2, 6, 7, 9, 1}};
  const int dxy[4][5] = {{1, 1, 4, 4, 1}, {5, 1, 8, 4, -1}, {1, 5, 4, 8, -1}, {5, 5, 8, 8, 1}};
  const auto g = filter_geometry(0, 0);
  EXPECT_EQ(g.size, 9u);
  auto check = [](const Lobe& lobe, const int* t) {
    EXPECT_EQ(lobe.rect, (Rect{std::size_t(t[1]), std::size_t(t[0]), std::size_t(t[3]), std::size_t(t[2])}));
    EXPECT_EQ(lobe.weight, t[4]);
  };
  for (int k = 0; k < 3; ++k) check(g.dxx[k], dx[k]);
  for (int k = 0; k < 3; ++k) check(g.dyy[k], dy[k]);
  for (int k = 0; k < 4; ++k) check(g.dxy[k], dxy[k]);
}

TEST(FilterGeometry, SizesAndRange) {
  const std::size_t expected[3][4] = {{9, 15, 21, 27}, {15, 27, 39, 51}, {27, 51, 75, 99}};
  for (std::size_t o = 0; o < 3; ++o)
    for (std::size_t l = 0; l < 4; ++l) EXPECT_EQ(filter_geometry(o, l).size, expected[o][l]);
  EXPECT_EQ(filter_geometry(0, 3).size, 27u);
  EXPECT_THROW(filter_geometry(3, 0), Error);
  EXPECT_THROW(filter_geometry(0, 4), Error);
  EXPECT_NO_THROW(filter_geometry(3, 0, {.octaves = 4, .layers = 4}));
}

TEST(FilterGeometry, LobeInvariants) {
  for (std::size_t o = 0; o < 4; ++o)
    for (std::size_t l = 0; l < 4; ++l) {
      const auto g = filter_geometry(o, l, {.octaves = 4, .layers = 4});
      const std::size_t L = g.size;
      ASSERT_EQ(L % 2, 1u);
      std::int64_t wsum = 0, xysum = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        const auto& a = g.dxx[k].rect;
        const auto& b = g.dyy[k].rect;
        ASSERT_LE(a.bottom, L);
        ASSERT_LE(a.right, L);
        ASSERT_EQ(a.area(), g.dxx[0].rect.area());
        ASSERT_EQ(b, (Rect{a.left, a.top, a.right, a.bottom}));  // transpose
        ASSERT_EQ(a.top + a.bottom, L);                            // vertically centred
        wsum += g.dxx[k].weight;
      }
      EXPECT_EQ(wsum, 0);
      for (const auto& lobe : g.dxy) {
        ASSERT_LE(lobe.rect.bottom, L);
        ASSERT_LE(lobe.rect.right, L);
        ASSERT_EQ(lobe.rect.area(), g.lobe * g.lobe);
        xysum += lobe.weight;
      }
      EXPECT_EQ(xysum, 0);
    }
}

TEST(Haar, ConstantImageIsNull) {
  const auto ii = mirror_integral(GrayImage(20, 20, 255, 173));
  const auto g = filter_geometry(0, 1);
  const auto h = haar_response(ii, 10, 10, g, 10000);
  ASSERT_TRUE(h);
  EXPECT_EQ(dec(h->dxx), (PlainRational{0, 10000}));
  EXPECT_EQ(dec(h->dyy), (PlainRational{0, 10000}));
  EXPECT_EQ(dec(h->dxy), (PlainRational{0, 10000}));
  EXPECT_FALSE(haar_response(ii, 3, 10, g, 10000));
}

TEST(Haar, StepEdgeMatchesPlainOracle) {
  GrayImage img(15, 15);
  for (std::size_t r = 0; r < 15; ++r)
    for (std::size_t c = 8; c < 15; ++c) img.at(r, c) = 200;
  const auto ii = mirror_integral(img);
  const auto pii = plain_integral_image(img);
  const auto g = filter_geometry(0, 0);
  for (std::size_t c = 4; c < 11; ++c) {
    const auto h = haar_response(ii, 7, c, g, 10000);
    const auto p = plain_haar(pii, 15, 3, c - 4, g, 10000);
    ASSERT_EQ(dec(h->dxx).numerator, p.dxx);
    ASSERT_EQ(dec(h->dyy).numerator, p.dyy);
    ASSERT_EQ(dec(h->dxy).numerator, p.dxy);
  }
  // Left lobe dark, right lobe bright at the edge: unit * (0 - 2*lobe + ...)
  const auto h = haar_response(ii, 7, 7, g, 10000);
  const std::int64_t unit = quantized_unit(9, 10000);
  EXPECT_EQ(unit, 123);
  // lobes cover columns [3,6) [6,9) [9,12): column 8 of the middle lobe is bright
  EXPECT_EQ(dec(h->dxx).numerator, unit * (0 - 2 * 5 * 200 + 15 * 200));
  EXPECT_EQ(dec(h->dyy).numerator, 0);
}

TEST(Haar, IntermediateNumeratorsWithinProofBounds) {
  const auto img = random_image(32, 32, 8);
  const auto pii = plain_integral_image(img);
  const std::int64_t bmn = 255 * 32 * 32;
  std::int64_t worst_xx = 0, worst_xy = 0;
  for (std::size_t o = 0; o < 3; ++o)
    for (std::size_t l = 0; l < 4; ++l) {
      const auto g = filter_geometry(o, l);
      for (std::size_t r = 0; r + g.size <= 32; ++r)
        for (std::size_t c = 0; c + g.size <= 32; ++c) {
          const auto h = plain_haar(pii, 32, r, c, g, 10000);
          worst_xx = std::max({worst_xx, std::abs(h.dxx), std::abs(h.dyy)});
          worst_xy = std::max(worst_xy, std::abs(h.dxy));
        }
    }
  EXPECT_LE(worst_xx, 3 * bmn);
  EXPECT_LE(worst_xy, 4 * bmn);
}

TEST(Hessian, DeterminantExamples) {
  const std::uint64_t V = 10000;
  HaarResponse ident{enc_frac(V, V), enc_frac(V, V), enc_frac(0, V)};
  EXPECT_EQ(dec(hessian_determinant(ident)), (PlainRational{std::int64_t(100 * V * V), 100 * V * V}));
  HaarResponse cross{enc_frac(0, V), enc_frac(0, V), enc_frac(V, V)};
  const auto d = dec(hessian_determinant(cross));
  EXPECT_EQ(d.denominator, 100 * V * V);
  EXPECT_DOUBLE_EQ(d.to_double(), -0.81);
  HaarResponse mixed{enc_frac(1, V), enc_frac(1, 7), enc_frac(0, V)};
  EXPECT_THROW(hessian_determinant(mixed), Error);
}

TEST(Hessian, TraceExamples) {
  const std::uint64_t V = 10000;
  EXPECT_EQ(dec(hessian_trace({enc_frac(0, V), enc_frac(0, V), enc_frac(5, V)})), (PlainRational{0, V * V}));
  EXPECT_EQ(dec(hessian_trace({enc_frac(-37, V), enc_frac(12, V), enc_frac(5, V)})),
            (PlainRational{std::int64_t(-37 * V + 12 * V), V * V}));
}

TEST(Hessian, RandomResponsesMatchIntegerFormula) {
  std::mt19937_64 g(77);
  const std::uint64_t V = 10000;
  for (int k = 0; k < 50; ++k) {
    const std::int64_t a = std::int64_t(g() % 2000001) - 1000000, b = std::int64_t(g() % 2000001) - 1000000,
                       c = std::int64_t(g() % 2000001) - 1000000;
    const HaarResponse h{enc_frac(a, V), enc_frac(b, V), enc_frac(c, V)};
    EXPECT_EQ(dec(hessian_determinant(h)), (PlainRational{100 * a * b - 81 * c * c, 100 * V * V}));
    EXPECT_EQ(dec(hessian_trace(h)), (PlainRational{a * std::int64_t(V) + b * std::int64_t(V), V * V}));
  }
}

TEST(Pyramid, ZeroImageGivesZeroPyramid) {
  const auto ii = mirror_integral(GrayImage(32, 32));
  const auto plain = decrypt_pyramid(mirror_keys().secret, build_pyramid(ii, {}));
  EXPECT_GT(plain.valid_count(), 0u);
  for (const auto& layer : plain.layers)
    for (const auto& cell : layer.cells)
      if (cell) {
        ASSERT_EQ(cell->determinant.numerator, 0);
        ASSERT_EQ(cell->trace.numerator, 0);
      }
}

TEST(Pyramid, FlatImagesAreNull) {
  for (std::uint32_t level : {1u, 99u, 255u}) {
    const auto plain = plain_pyramid(GrayImage(40, 40, 255, level), {}, 10000);
    for (const auto& layer : plain.layers)
      for (const auto& cell : layer.cells)
        if (cell) {
          ASSERT_EQ(cell->determinant.numerator, 0);
          ASSERT_EQ(cell->trace.numerator, 0);
        }
  }
}

TEST(Pyramid, MirrorMatchesPlainOracleWithDenominatorSchedule) {
  const auto img = random_image(32, 32, 17);
  const auto enc = build_pyramid(mirror_integral(img), {.workers = 3});
  for (const auto& layer : enc.layers)
    for (const auto& cell : layer.cells)
      if (cell) {
        ASSERT_EQ(cell->determinant.denominator(), 100'000'000'00u);
        ASSERT_EQ(cell->trace.denominator(), 100'000'000u);
      }
  expect_same(decrypt_pyramid(mirror_keys().secret, enc, 2), plain_pyramid(img, {}, 10000));
}

TEST(Pyramid, SampleLatticeAndValidity) {
  const auto plain = plain_pyramid(random_image(32, 32, 1), {}, 10000);
  const auto& l00 = plain.layer(0, 0);
  EXPECT_EQ(l00.rows, 32u);
  EXPECT_EQ(l00.step, 1u);
  EXPECT_FALSE(l00.at(3, 10));
  EXPECT_TRUE(l00.at(4, 4));
  EXPECT_TRUE(l00.at(27, 27));
  EXPECT_FALSE(l00.at(28, 27));
  const auto& l10 = plain.layer(1, 0);
  EXPECT_EQ(l10.rows, 16u);
  EXPECT_EQ(l10.step, 2u);
  EXPECT_TRUE(l10.at(4, 4));   // pixel (8, 8), L = 15
  EXPECT_FALSE(l10.at(3, 4));  // pixel (6, 8)
  EXPECT_EQ(plain.layer(2, 3).valid_count(), 0u);
}

TEST(Pyramid, GswMatchesMirrorOnSmallImage) {
  const auto img = random_image(11, 11, 23);
  fhe::KeyholderRefresh service(gsw_keys(), 9);
  const RefreshPolicy policy{.every_rows = 4, .service = &service};
  const auto ii = integral_image(gsw_keys().pub, encrypt_image(gsw_keys().pub, img, 2), policy, 3);
  PipelineStats stats;
  const auto enc = build_pyramid(ii, {.config = {.octaves = 1, .layers = 1}, .refresh = policy}, &stats);
  EXPECT_EQ(enc.valid_count(), 9u);
  expect_same(decrypt_pyramid(gsw_keys().secret, enc), plain_pyramid(img, {.octaves = 1, .layers = 1}, 10000));
  EXPECT_LT(stats.max_noise, fhe::noise_threshold(FheParams::toy()));
}

TEST(Pyramid, TamperedCiphertextIsLocalized) {
  const auto img = random_image(11, 11, 24);
  const auto ii = integral_image(gsw_keys().pub, encrypt_image(gsw_keys().pub, img, 2), {}, 3);
  fhe::KeyholderRefresh service(gsw_keys(), 9);
  auto enc = build_pyramid(ii, {.config = {.octaves = 1, .layers = 1}, .refresh = {.service = &service}});
  auto& cell = enc.layer(0, 0).at(5, 6);
  const auto& ct = cell->determinant.numerator();
  auto noisy = fhe::Ciphertext::make_gsw(ct.params(), {ct.gsw_rows().begin(), ct.gsw_rows().end()},
                                         ct.params().q / 2, ct.magnitude_bound());
  cell->determinant = cell->determinant.with_numerator(std::move(noisy));
  try {
    decrypt_pyramid(gsw_keys().secret, enc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::decryption_failure);
    EXPECT_NE(std::string(e.what()).find("octave=0 layer=0 x=6 y=5"), std::string::npos) << e.what();
  }
}

TEST(Pyramid, RejectsTinyImagesAndBadV) {
  EXPECT_THROW(build_pyramid(mirror_integral(GrayImage(8, 20)), {}), Error);
  EXPECT_THROW(build_pyramid(mirror_integral(GrayImage(20, 20)), {.base_denominator = 1u << 30}), Error);
}

TEST(PyramidIo, EncryptedRoundTripAndCsv) {
  const auto img = random_image(20, 20, 5);
  const auto ii = mirror_integral(img);
  const auto enc = build_pyramid(ii, {});
  std::stringstream buf;
  write_encrypted_pyramid(buf, enc);
  const auto back = read_encrypted_pyramid(buf);
  expect_same(decrypt_pyramid(mirror_keys().secret, back), decrypt_pyramid(mirror_keys().secret, enc));

  std::stringstream csv;
  write_pyramid_csv(csv, plain_pyramid(img, {}, 10000));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header,
            "octave,layer,x,y,det_numerator,det_denominator,trace_numerator,trace_denominator,det_float,trace_float");
  std::size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  EXPECT_EQ(lines, enc.valid_count());
}

TEST(PyramidIo, EncryptedImageRoundTripAndBadMagic) {
  GrayImage img(3, 2);
  img.pixels = {1, 2, 3, 4, 5, 6};
  const auto enc = encrypt_image(mirror_keys().pub, img, 1);
  std::stringstream buf;
  write_encrypted_image(buf, enc);
  const auto back = read_encrypted_image(buf);
  ASSERT_EQ(back.pixels.size(), 6u);
  EXPECT_EQ(dec(back.at(2, 1)), (PlainRational{6, 1}));
  std::stringstream bad("CSURF-PYR");
  EXPECT_THROW(read_encrypted_image(bad), Error);
}

TEST(Workers, ParallelBuildIsDeterministic) {
  const auto img = random_image(24, 24, 6);
  const auto a = decrypt_pyramid(mirror_keys().secret, build_pyramid(mirror_integral(img), {.workers = 1}));
  const auto b = decrypt_pyramid(mirror_keys().secret, build_pyramid(mirror_integral(img), {.workers = 4}));
  expect_same(a, b);
  const auto e1 = encrypt_image(gsw_keys().pub, GrayImage(2, 2, 255, 9), 7, 1);
  const auto e4 = encrypt_image(gsw_keys().pub, GrayImage(2, 2, 255, 9), 7, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& x = e1.pixels[i].numerator().gsw_rows();
    ASSERT_TRUE(std::equal(x.begin(), x.end(), e4.pixels[i].numerator().gsw_rows().begin()));
  }
}
