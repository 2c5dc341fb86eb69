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

#include "csurf/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "csurf/bounds/bounds.hpp"
#include "csurf/error.hpp"
#include "csurf/fhe/evaluator.hpp"
#include "csurf/fhe/refresh.hpp"
#include "csurf/fhe/serialize.hpp"
#include "csurf/io/binary.hpp"
#include "csurf/keypoints/keypoints.hpp"
#include "csurf/surf/image.hpp"
#include "csurf/surf/pipeline.hpp"
#include "csurf/surf/pyramid_io.hpp"

namespace csurf::cli {

namespace fs = std::filesystem;
using surf::FloatPyramid;
using surf::PlainPyramid;

namespace {

constexpr const char* kImageCt = "image.ct";
constexpr const char* kPyramidCt = "pyramid.ct";
constexpr const char* kPyramidCsv = "pyramid.csv";
constexpr const char* kPyramidMeta = "pyramid.meta";
constexpr const char* kStats = "stats.txt";
constexpr const char* kKeypoints = "keypoints.csv";
constexpr const char* kReferenceKeypoints = "reference_keypoints.csv";
constexpr const char* kCompare = "compare.txt";
constexpr const char* kSummary = "summary.txt";
constexpr const char* kTimings = "timings.txt";

struct RunConfig {
  std::string image;
  std::string backend = "gsw";
  std::string q = "2^56";
  std::uint64_t V = 10000;
  std::size_t octaves = 3;
  std::size_t layers = 4;
  double threshold = 5.0;
  int refresh_rows = -1;  // -1: 4 rows under gsw, off under mirror
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "csurf-out";
  bool unsafe_skip_certify = false;
  std::size_t height = 0, width = 0;
  std::uint32_t bound = 0;
  bool q_given = false;

  fhe::Backend backend_id() const { return fhe::parse_backend(backend); }
  surf::PyramidConfig pyramid() const {
    surf::PyramidConfig c{octaves, layers};
    c.validate();
    return c;
  }
  fs::path out() const { return fs::path(out_dir); }
  std::size_t effective_refresh_rows(fhe::Backend b) const {
    if (refresh_rows >= 0) return static_cast<std::size_t>(refresh_rows);
    return b == fhe::Backend::gsw ? 4 : 0;
  }
};

// Independent seeds for each stage, all derived from the single config seed.
std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stage + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  auto f = io::open_output(path, false);
  f << text;
  if (!f) fail(Errc::io, "failed writing " + path.string());
}

class Stopwatch {
 public:
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

surf::GrayImage require_image(const RunConfig& cfg) {
  if (cfg.image.empty()) fail(Errc::invalid_argument, "--image is required");
  return surf::load_pgm(cfg.image);
}

// Certification gate in front of every encrypted run.
void certify_or_fail(const RunConfig& cfg, std::uint64_t q, std::uint32_t B, std::size_t h, std::size_t w,
                     std::ostream& err) {
  if (cfg.unsafe_skip_certify) {
    err << "warning: UNSAFE certification skipped (q=" << q << " V=" << cfg.V << " B=" << B << " m=" << h
        << " n=" << w << ")\n";
    return;
  }
  const auto report = bounds::check_theorem(q, cfg.V, B, h, w);
  if (!report.pass())
    fail(Errc::bounds_violation, "parameters fail certification (q=" + std::to_string(q) + " V=" +
                                     std::to_string(cfg.V) + " B=" + std::to_string(B) + " m=" + std::to_string(h) +
                                     " n=" + std::to_string(w) + "); rerun certify for details");
}

fhe::FheParams fhe_params(const RunConfig& cfg) {
  fhe::FheParams p = fhe::FheParams::toy();
  p.q = parse_modulus(cfg.q);
  if (p.q != fhe::FheParams::toy().q) p.label = fhe::SecurityLabel::custom;
  return p;
}

void check_key_modulus(const RunConfig& cfg, const fhe::FheParams& key_params) {
  if (cfg.q_given && parse_modulus(cfg.q) != key_params.q)
    fail(Errc::params_mismatch, "--q " + cfg.q + " differs from the key modulus " + std::to_string(key_params.q));
}

std::string stats_text(const surf::PipelineStats& s, std::size_t valid_points) {
  std::ostringstream o;
  o << "valid_points=" << valid_points << "\nintegral_refreshes=" << s.integral_refreshes
    << "\nhaar_refreshes=" << s.haar_refreshes << "\nmax_noise=" << s.max_noise
    << "\nmay_wrap_points=" << s.may_wrap_points << "\n";
  return o.str();
}

struct PyramidRun {
  surf::EncryptedPyramid pyramid;
  surf::PipelineStats stats;
  double integral_ms = 0, pyramid_ms = 0;
};

PyramidRun run_pyramid(const RunConfig& cfg, const fhe::KeyPair* keys, const fhe::PublicKey& pk,
                       const surf::EncryptedImage& img) {
  const auto backend = pk.backend;
  std::unique_ptr<fhe::KeyholderRefresh> service;
  if (keys) service = std::make_unique<fhe::KeyholderRefresh>(*keys, stage_seed(cfg.seed, 3));

  surf::RefreshPolicy policy;
  policy.every_rows = service ? cfg.effective_refresh_rows(backend) : 0;
  policy.service = service.get();

  PyramidRun run;
  Stopwatch sw;
  const auto ii = surf::integral_image(pk, img, policy, stage_seed(cfg.seed, 2), &run.stats);
  run.integral_ms = sw.lap_ms();
  surf::BuildOptions options;
  options.config = cfg.pyramid();
  options.base_denominator = cfg.V;
  options.refresh = policy;
  options.workers = cfg.workers;
  run.pyramid = surf::build_pyramid(ii, options, &run.stats);
  run.pyramid_ms = sw.lap_ms();
  return run;
}

void write_decrypted(const fs::path& dir, const PlainPyramid& p) {
  {
    auto f = io::open_output(dir / kPyramidCsv, false);
    surf::write_pyramid_csv(f, p);
  }
  auto f = io::open_output(dir / kPyramidMeta, false);
  surf::write_pyramid_shape(f, {p.config, p.height, p.width, p.base_denominator});
}

PlainPyramid read_decrypted(const fs::path& dir) {
  auto meta = io::open_input(dir / kPyramidMeta, false);
  const auto shape = surf::read_pyramid_shape(meta);
  shape.config.validate();
  auto csv = io::open_input(dir / kPyramidCsv, false);
  return surf::read_pyramid_csv(csv, shape.config, shape.height, shape.width, shape.base_denominator);
}

void write_keypoints(const fs::path& path, const std::vector<keypoints::Keypoint>& kps) {
  auto f = io::open_output(path, false);
  keypoints::write_keypoints_csv(f, kps);
}

// Magnitudes actually seen in the decrypted pyramid.
std::string observed_magnitudes(const PlainPyramid& p) {
  std::uint64_t det_num = 0, det_den = 0, tr_num = 0, tr_den = 0;
  for (const auto& layer : p.layers)
    for (const auto& cell : layer.cells) {
      if (!cell) continue;
      det_num = std::max(det_num, fhe::abs_u64(cell->determinant.numerator));
      det_den = std::max(det_den, cell->determinant.denominator);
      tr_num = std::max(tr_num, fhe::abs_u64(cell->trace.numerator));
      tr_den = std::max(tr_den, cell->trace.denominator);
    }
  std::ostringstream o;
  o << "max_det_numerator=" << det_num << "\nmax_det_denominator=" << det_den << "\nmax_trace_numerator=" << tr_num
    << "\nmax_trace_denominator=" << tr_den << "\n";
  return o.str();
}

// Decrypted versus unquantized reference, with the per-point error bound.
std::string error_statistics(const FloatPyramid& enc, const FloatPyramid& ref, const FloatPyramid& bound) {
  double max_det = 0, max_tr = 0, sum_det = 0, worst_ratio = 0;
  std::size_t points = 0, violations = 0;
  for (std::size_t k = 0; k < enc.layers.size(); ++k) {
    const auto& e = enc.layers[k];
    const auto& r = ref.layers[k];
    const auto& b = bound.layers[k];
    for (std::size_t i = 0; i < e.cells.size(); ++i) {
      if (!e.cells[i] || !r.cells[i]) continue;
      const double de = std::abs(e.cells[i]->determinant - r.cells[i]->determinant);
      const double te = std::abs(e.cells[i]->trace - r.cells[i]->trace);
      max_det = std::max(max_det, de);
      max_tr = std::max(max_tr, te);
      sum_det += de;
      ++points;
      const double db = b.cells[i]->determinant, tb = b.cells[i]->trace;
      const double slack = 1e-9 * (1.0 + db + tb);
      if (de > db + slack || te > tb + slack) ++violations;
      if (db > 0) worst_ratio = std::max(worst_ratio, de / db);
      if (tb > 0) worst_ratio = std::max(worst_ratio, te / tb);
    }
  }
  std::ostringstream o;
  o << "compared_points=" << points << "\nmax_det_error=" << fmt(max_det)
    << "\nmean_det_error=" << fmt(points ? sum_det / static_cast<double>(points) : 0.0)
    << "\nmax_trace_error=" << fmt(max_tr) << "\nmax_error_to_bound_ratio=" << fmt(worst_ratio)
    << "\nbound_violations=" << violations << "\n";
  return o.str();
}

struct CompareResult {
  std::string text;  // key=value block followed by near-tie lines
  keypoints::ComparisonStats stats;
};

CompareResult run_compare(const RunConfig& cfg, const surf::GrayImage& img, const FloatPyramid& enc,
                          const std::vector<keypoints::Keypoint>& enc_kps, const fs::path& dir) {
  const auto config = enc.config;
  const auto ref = keypoints::reference_pyramid(img, config);
  const auto ref_kps = keypoints::extract_keypoints(ref, cfg.threshold);
  write_keypoints(dir / kReferenceKeypoints, ref_kps);
  const auto bound = keypoints::error_bound_pyramid(img, config, enc.base_denominator);

  CompareResult res;
  res.stats = keypoints::compare_keypoints(ref_kps, enc_kps);
  const auto ties = keypoints::diagnose_disagreements(ref, enc, bound, ref_kps, enc_kps, res.stats, cfg.threshold);

  std::ostringstream o;
  o << keypoints::to_key_values(res.stats);
  o << error_statistics(enc, ref, bound);
  const auto explained = std::count_if(ties.begin(), ties.end(), [](const auto& t) { return t.explained; });
  o << "near_ties=" << ties.size() << "\nnear_ties_explained=" << explained << "\n";
  for (std::size_t k = 0; k < ties.size(); ++k) {
    const auto& t = ties[k];
    o << "near_tie_" << k << "=side:" << (t.from_reference ? "reference" : "encrypted") << " x:" << t.keypoint.x
      << " y:" << t.keypoint.y << " octave:" << t.keypoint.octave << " layer:" << t.keypoint.layer
      << " rival:" << t.rival << " margin:" << fmt(t.reference_margin)
      << " relative_margin:" << fmt(t.relative_margin) << " observed_error:" << fmt(t.observed_error)
      << " error_bound:" << fmt(t.error_bound) << " explained:" << (t.explained ? 1 : 0) << "\n";
    // Maps need a window around the point; shrink it near the grid edge.
    for (std::size_t radius : {2u, 1u}) {
      std::ostringstream map;
      try {
        keypoints::write_intensity_map(map, ref, enc, t.keypoint.octave, t.keypoint.layer, t.keypoint.x,
                                       t.keypoint.y, radius);
      } catch (const Error& e) {
        if (e.code() != Errc::out_of_bounds) throw;
        continue;
      }
      write_text(dir / ("intensity_map_" + std::to_string(k) + ".csv"), map.str());
      break;
    }
  }
  res.text = o.str();
  write_text(dir / kCompare, res.text);
  return res;
}

// --- subcommands --------------------------------------------------------------

int cmd_keygen(const RunConfig& cfg, std::ostream& out) {
  const auto params = fhe_params(cfg);
  const auto keys = fhe::keygen(params, cfg.backend_id(), stage_seed(cfg.seed, 0));
  fhe::save_key_pair(cfg.out(), keys);
  out << "keys written to " << cfg.out().string() << "\n";
  return exit_ok;
}

int cmd_encrypt(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto img = require_image(cfg);
  const auto pk = fhe::load_public_key(cfg.out());
  check_key_modulus(cfg, pk.params);
  certify_or_fail(cfg, pk.params.q, img.bound, img.height, img.width, err);
  const auto enc = surf::encrypt_image(pk, img, stage_seed(cfg.seed, 1), cfg.workers);
  surf::save_encrypted_image(cfg.out() / kImageCt, enc);
  out << "encrypted " << img.height << "x" << img.width << " image to " << (cfg.out() / kImageCt).string() << "\n";
  return exit_ok;
}

int cmd_pyramid(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto img = surf::load_encrypted_image(cfg.out() / kImageCt);
  const auto pk = fhe::load_public_key(cfg.out());
  check_key_modulus(cfg, pk.params);
  certify_or_fail(cfg, pk.params.q, img.bound, img.height, img.width, err);
  // The refresh service stands in for the key holder, so it needs the secret key.
  std::optional<fhe::KeyPair> keys;
  if (cfg.effective_refresh_rows(pk.backend) > 0 || pk.backend == fhe::Backend::gsw)
    keys = fhe::load_key_pair(cfg.out());
  const auto run = run_pyramid(cfg, keys ? &*keys : nullptr, pk, img);
  surf::save_encrypted_pyramid(cfg.out() / kPyramidCt, run.pyramid);
  write_text(cfg.out() / kStats, stats_text(run.stats, run.pyramid.valid_count()));
  out << stats_text(run.stats, run.pyramid.valid_count());
  return exit_ok;
}

int cmd_decrypt(const RunConfig& cfg, std::ostream& out) {
  const auto keys = fhe::load_key_pair(cfg.out());
  const auto pyr = surf::load_encrypted_pyramid(cfg.out() / kPyramidCt);
  const auto plain = surf::decrypt_pyramid(keys.secret, pyr, cfg.workers);
  write_decrypted(cfg.out(), plain);
  out << observed_magnitudes(plain);
  return exit_ok;
}

int cmd_extract(const RunConfig& cfg, std::ostream& out) {
  const auto pyr = surf::to_float(read_decrypted(cfg.out()));
  const auto kps = keypoints::extract_keypoints(pyr, cfg.threshold);
  write_keypoints(cfg.out() / kKeypoints, kps);
  out << "keypoints=" << kps.size() << "\n";
  return exit_ok;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  const auto img = require_image(cfg);
  const auto enc = surf::to_float(read_decrypted(cfg.out()));
  if (enc.height != img.height || enc.width != img.width)
    fail(Errc::params_mismatch, "decrypted pyramid does not match the size of --image");
  std::vector<keypoints::Keypoint> kps;
  if (fs::exists(cfg.out() / kKeypoints)) {
    auto f = io::open_input(cfg.out() / kKeypoints, false);
    kps = keypoints::read_keypoints_csv(f);
  } else {
    kps = keypoints::extract_keypoints(enc, cfg.threshold);
  }
  out << run_compare(cfg, img, enc, kps, cfg.out()).text;
  return exit_ok;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  std::size_t h = cfg.height, w = cfg.width;
  std::uint32_t B = cfg.bound;
  if (!cfg.image.empty()) {
    const auto img = surf::load_pgm(cfg.image);
    if (h == 0) h = img.height;
    if (w == 0) w = img.width;
    if (B == 0) B = img.bound;
  }
  if (B == 0) B = 255;
  if (h == 0 || w == 0) fail(Errc::invalid_argument, "certify needs --image or both --height and --width");
  const auto report = bounds::check_theorem(parse_modulus(cfg.q), cfg.V, B, h, w);
  out << report.text() << report.key_values();
  if (!report.pass()) {
    try {
      out << "suggested_q=" << bounds::suggest_modulus(cfg.V, B, h, w) << "\n";
    } catch (const Error&) {
      out << "suggested_q=none\n";
    }
    return exit_bounds;
  }
  return exit_ok;
}

int cmd_run_all(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Stopwatch sw, total;
  const auto img = require_image(cfg);
  const auto backend = cfg.backend_id();
  const auto params = fhe_params(cfg);
  const auto config = cfg.pyramid();
  certify_or_fail(cfg, params.q, img.bound, img.height, img.width, err);
  const double setup_ms = sw.lap_ms();

  const auto keys = fhe::keygen(params, backend, stage_seed(cfg.seed, 0));
  fhe::save_key_pair(cfg.out(), keys);
  const double keygen_ms = sw.lap_ms();

  const auto enc_img = surf::encrypt_image(keys.pub, img, stage_seed(cfg.seed, 1), cfg.workers);
  // gsw ciphertext files run to megabytes each; those stay in memory.
  const bool write_ciphertexts = backend == fhe::Backend::mirror;
  if (write_ciphertexts) surf::save_encrypted_image(cfg.out() / kImageCt, enc_img);
  const double encrypt_ms = sw.lap_ms();

  const bool want_service = cfg.effective_refresh_rows(backend) > 0 || backend == fhe::Backend::gsw;
  auto run = run_pyramid(cfg, want_service ? &keys : nullptr, keys.pub, enc_img);
  if (write_ciphertexts) surf::save_encrypted_pyramid(cfg.out() / kPyramidCt, run.pyramid);
  const auto stats = stats_text(run.stats, run.pyramid.valid_count());
  write_text(cfg.out() / kStats, stats);
  sw.lap_ms();

  const auto plain = surf::decrypt_pyramid(keys.secret, run.pyramid, cfg.workers);
  write_decrypted(cfg.out(), plain);
  const double decrypt_ms = sw.lap_ms();

  const auto enc = surf::to_float(plain);
  const auto kps = keypoints::extract_keypoints(enc, cfg.threshold);
  write_keypoints(cfg.out() / kKeypoints, kps);
  const double extract_ms = sw.lap_ms();

  const auto cmp = run_compare(cfg, img, enc, kps, cfg.out());
  const double compare_ms = sw.lap_ms();

  std::ostringstream summary;
  summary << "backend=" << fhe::to_string(backend) << "\nq=" << params.q << "\nV=" << cfg.V
          << "\noctaves=" << config.octaves << "\nlayers=" << config.layers << "\nthreshold=" << fmt(cfg.threshold)
          << "\nheight=" << img.height << "\nwidth=" << img.width << "\nbound=" << img.bound
          << "\ncertified=" << (cfg.unsafe_skip_certify ? "skipped" : "pass")
          << "\nrefresh_rows=" << cfg.effective_refresh_rows(backend) << "\n"
          << stats << observed_magnitudes(plain) << cmp.text;
  write_text(cfg.out() / kSummary, summary.str());

  std::ostringstream timings;
  timings << "setup_ms=" << fmt(setup_ms) << "\nkeygen_ms=" << fmt(keygen_ms) << "\nencrypt_ms=" << fmt(encrypt_ms)
          << "\nintegral_ms=" << fmt(run.integral_ms) << "\npyramid_ms=" << fmt(run.pyramid_ms)
          << "\ndecrypt_ms=" << fmt(decrypt_ms) << "\nextract_ms=" << fmt(extract_ms)
          << "\ncompare_ms=" << fmt(compare_ms) << "\ntotal_ms=" << fmt(total.lap_ms()) << "\n";
  write_text(cfg.out() / kTimings, timings.str());

  out << summary.str() << timings.str();
  return exit_ok;
}

int exit_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return exit_config;
    case ErrorCategory::io: return exit_io;
    case ErrorCategory::bounds: return exit_bounds;
    case ErrorCategory::decrypt_failure: return exit_decrypt_failure;
    case ErrorCategory::internal: return exit_internal;
  }
  return exit_internal;
}

int report(std::ostream& err, std::string_view category, const std::string& message, int code) {
  err << "error: category=" << category << " message=" << message << "\n";
  return code;
}

}  // namespace

std::uint64_t parse_modulus(const std::string& text) {
  const auto bad = [&] { fail(Errc::invalid_params, "cannot parse modulus '" + text + "'"); };
  const auto to_u64 = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) bad();
    try {
      return static_cast<std::uint64_t>(std::stoull(s));
    } catch (const std::exception&) {
      bad();
    }
    return std::uint64_t{0};
  };
  std::uint64_t q = 0;
  const auto caret = text.find('^');
  if (caret == std::string::npos) {
    q = to_u64(text);
  } else {
    const auto base = to_u64(text.substr(0, caret));
    const auto exp = to_u64(text.substr(caret + 1));
    q = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (base != 0 && q > std::numeric_limits<std::uint64_t>::max() / base)
        fail(Errc::invalid_params, "modulus " + text + " does not fit in 64 bits");
      q *= base;
    }
  }
  if (q < 4) fail(Errc::invalid_params, "modulus must be at least 4");
  return q;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"SURF scale-space pyramid over encrypted images", "csurf"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  app.add_option("--image", cfg.image, "input PGM image");
  app.add_option("--backend", cfg.backend, "gsw or mirror")->check(CLI::IsMember({"gsw", "mirror"}));
  auto* q_opt = app.add_option("--q", cfg.q, "ciphertext modulus: decimal, 2^k or 256^k");
  app.add_option("--V", cfg.V, "base denominator")->check(CLI::PositiveNumber);
  app.add_option("--octaves", cfg.octaves)->check(CLI::Range(1, 8));
  app.add_option("--layers", cfg.layers)->check(CLI::Range(1, 16));
  app.add_option("--threshold", cfg.threshold, "keypoint response threshold");
  app.add_option("--refresh-rows", cfg.refresh_rows, "integral image refresh period in rows; -1 picks per backend")
      ->check(CLI::Range(-1, 1 << 20));
  app.add_option("--workers", cfg.workers)->check(CLI::Range(1, 1024));
  app.add_option("--seed", cfg.seed);
  app.add_option("--out-dir", cfg.out_dir, "directory for keys and outputs");
  app.add_flag("--unsafe-skip-certify", cfg.unsafe_skip_certify, "run without the bound certification");
  app.add_option("--height", cfg.height, "image height for certify");
  app.add_option("--width", cfg.width, "image width for certify");
  app.add_option("--bound", cfg.bound, "pixel bound for certify");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"keygen", "generate a key pair"},
      {"encrypt", "encrypt --image"},
      {"pyramid", "build the encrypted scale-space pyramid"},
      {"decrypt", "decrypt the pyramid to CSV"},
      {"extract", "extract keypoints from the decrypted pyramid"},
      {"compare", "compare against the plaintext reference of --image"},
      {"certify", "check the modulus bounds"},
      {"run-all", "run every stage on --image"},
  };
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::FileError& e) {
    return report(err, "io", e.what(), exit_io);
  } catch (const CLI::ParseError& e) {
    return report(err, "config", e.what(), exit_config);
  }
  cfg.q_given = q_opt->count() > 0;

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "certify") return cmd_certify(cfg, out);
    fs::create_directories(cfg.out());
    if (cmd == "keygen") return cmd_keygen(cfg, out);
    if (cmd == "encrypt") return cmd_encrypt(cfg, out, err);
    if (cmd == "pyramid") return cmd_pyramid(cfg, out, err);
    if (cmd == "decrypt") return cmd_decrypt(cfg, out);
    if (cmd == "extract") return cmd_extract(cfg, out);
    if (cmd == "compare") return cmd_compare(cfg, out);
    return cmd_run_all(cfg, out, err);
  } catch (const Error& e) {
    return report(err, to_string(e.category()), std::string(to_string(e.code())) + ": " + e.what(),
                  exit_for(e.category()));
  } catch (const fs::filesystem_error& e) {
    return report(err, "io", e.what(), exit_io);
  } catch (const std::exception& e) {
    return report(err, "internal", e.what(), exit_internal);
  }
}

}  // namespace csurf::cli
