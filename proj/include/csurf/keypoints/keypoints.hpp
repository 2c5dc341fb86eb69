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
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csurf/surf/image.hpp"
#include "csurf/surf/pyramid.hpp"

namespace csurf::keypoints {

using surf::FloatPyramid;
using surf::GrayImage;
using surf::PyramidConfig;

struct ReferenceHaar {
  double dxx = 0, dyy = 0, dxy = 0;
};

// Unquantized responses: lobe weights w / L^2 in double precision.
ReferenceHaar reference_haar(const std::vector<std::int64_t>& integral, std::size_t width, std::size_t top,
                             std::size_t left, const surf::FilterGeometry& geom);
FloatPyramid reference_pyramid(const GrayImage& img, const PyramidConfig& config);

// Per-point quantization error bounds at denominator V, evaluated with the
// reference responses of each point (determinant field = det bound, trace
// field = trace bound).
FloatPyramid error_bound_pyramid(const GrayImage& img, const PyramidConfig& config, std::uint64_t base_denominator);

struct Keypoint {
  std::size_t x = 0, y = 0;  // pixel coordinates
  std::size_t octave = 0, layer = 0;
  double response = 0;
  int laplacian_sign = 0;

  friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

// Strict maxima over the 26 neighbours in adjacent layers of one octave, with
// response > threshold. Only cells whose full neighbourhood exists qualify.
// Throws Errc::invalid_argument with fewer than three layers.
std::vector<Keypoint> extract_keypoints(const FloatPyramid& pyr, double threshold);

struct ComparisonStats {
  std::size_t reference_count = 0, encrypted_count = 0;
  std::size_t matched = 0;
  std::size_t unmatched_reference = 0, unmatched_encrypted = 0;
  std::vector<std::size_t> unmatched_reference_indices, unmatched_encrypted_indices;

  // matched / max(counts); 1 when both lists are empty.
  double agreement() const noexcept;
};

// Greedy nearest-neighbour matching inside `radius` pixels, same octave only.
ComparisonStats compare_keypoints(const std::vector<Keypoint>& reference, const std::vector<Keypoint>& encrypted,
                                  double radius = 2.0);

struct CorpusStats {
  std::size_t images = 0;
  std::size_t reference_total = 0, encrypted_total = 0, matched_total = 0;
  std::size_t max_total = 0;       // sum over images of max(ref, enc)
  std::size_t exact_count_images = 0;

  void add(const ComparisonStats& s);
  double agreement() const noexcept;     // matched_total / max_total
  double recall() const noexcept;        // matched_total / reference_total
  double totals_ratio() const noexcept;  // encrypted_total / reference_total
  std::string key_values() const;
};

// Long-format CSV of a (2r+1)^2 window around pixel (cx, cy) for both
// pyramids at `layer` and the layer below it:
// source,octave,layer,row_offset,col_offset,x,y,response
// Cells without a full footprint have an empty response. Throws
// Errc::out_of_bounds if the window leaves the sample grid.
void write_intensity_map(std::ostream& out, const FloatPyramid& reference, const FloatPyramid& encrypted,
                         std::size_t octave, std::size_t layer, std::size_t cx, std::size_t cy, std::size_t radius);

struct NearTie {
  Keypoint keypoint;       // the point found by one side only
  bool from_reference = true;
  std::string rival;       // "threshold" or "x,y,layer" of the neighbour that won on the other side
  double reference_margin = 0;  // keypoint value minus rival value, reference pyramid
  double relative_margin = 0;   // reference_margin / |keypoint response|
  double observed_error = 0;    // |enc - ref| at the keypoint plus at the rival
  double error_bound = 0;       // quantization bound at the keypoint plus at the rival
  bool explained = false;       // margin within observed error and error within the bound
};

// For every unmatched keypoint, finds why the other pyramid rejects that cell.
std::vector<NearTie> diagnose_disagreements(const FloatPyramid& reference, const FloatPyramid& encrypted,
                                            const FloatPyramid& bounds, const std::vector<Keypoint>& ref_kps,
                                            const std::vector<Keypoint>& enc_kps, const ComparisonStats& stats,
                                            double threshold);

// x,y,octave,layer,response,laplacian_sign
void write_keypoints_csv(std::ostream& out, const std::vector<Keypoint>& kps);
std::vector<Keypoint> read_keypoints_csv(std::istream& in);

std::string to_key_values(const ComparisonStats& s);

}  // namespace csurf::keypoints
