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

#include "csurf/fhe/serialize.hpp"

#include <string>
#include <vector>

#include "csurf/error.hpp"
#include "csurf/io/binary.hpp"

namespace csurf::fhe {

namespace {

struct ParamsBlock {
  FheParams params;
  Backend backend;
};

void write_params(std::ostream& out, const FheParams& params, Backend backend) {
  io::write_u64(out, params.q);
  io::write_u64(out, params.n);
  io::write_u64(out, params.ell());
  io::write_u64(out, backend == Backend::gsw ? params.dimension() : 1);
}

ParamsBlock read_params(std::istream& in) {
  ParamsBlock block{};
  block.params.q = io::read_u64(in);
  block.params.n = io::read_u64(in);
  const std::uint64_t ell = io::read_u64(in);
  const std::uint64_t dim = io::read_u64(in);
  block.params.label = SecurityLabel::custom;
  if (block.params.q < 4 || block.params.n == 0 || ell != block.params.ell())
    fail(Errc::format, "inconsistent parameter block (q=" + std::to_string(block.params.q) +
                           ", n=" + std::to_string(block.params.n) + ", ell=" + std::to_string(ell) + ")");
  if (dim == 1) {
    block.backend = Backend::mirror;
  } else if (dim == block.params.dimension()) {
    block.backend = Backend::gsw;
  } else {
    fail(Errc::format, "parameter block N=" + std::to_string(dim) + " matches neither backend");
  }
  return block;
}

void read_version(std::istream& in) {
  const auto version = io::read_u8(in);
  if (version != kFormatVersion)
    fail(Errc::format, "unsupported format version " + std::to_string(version));
}

}  // namespace

void write_ciphertext(std::ostream& out, const Ciphertext& ct) {
  io::write_magic(out, "CSURF-CT");
  io::write_u8(out, kFormatVersion);
  write_params(out, ct.params(), ct.backend());
  if (ct.backend() == Backend::mirror) {
    io::write_u64(out, ct.mirror_residue());
  } else {
    const std::size_t dim = ct.body_dimension();
    const std::size_t ell = static_cast<std::size_t>(ct.params().ell());
    const auto rows = ct.gsw_rows();
    std::string buffer(dim * 8, '\0');
    for (std::size_t i = 0; i < dim; ++i) {
      const std::uint64_t* row = rows.data() + i * ct.stride();
      for (std::size_t j = 0; j < dim; ++j) buffer[8 * j] = static_cast<char>((row[j / ell] >> (j % ell)) & 1u);
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    }
  }
  io::write_u64(out, ct.noise_level());
  io::write_u64(out, ct.magnitude_bound());
  if (!out) fail(Errc::io, "failed writing ciphertext");
}

Ciphertext read_ciphertext(std::istream& in) {
  io::expect_magic(in, "CSURF-CT", "ciphertext");
  read_version(in);
  const ParamsBlock block = read_params(in);
  const FheParams& params = block.params;
  if (block.backend == Backend::mirror) {
    const std::uint64_t residue = io::read_u64(in);
    const std::uint64_t noise = io::read_u64(in);
    const std::uint64_t magnitude = io::read_u64(in);
    if (noise != 0) fail(Errc::format, "mirror ciphertext with nonzero noise");
    return Ciphertext::make_mirror(params, residue, magnitude);
  }
  const std::size_t dim = static_cast<std::size_t>(params.dimension());
  const std::size_t ell = static_cast<std::size_t>(params.ell());
  const std::size_t stride = padded_width(params.n);
  std::vector<std::uint64_t> rows(dim * stride, 0);
  std::string buffer(dim * 8, '\0');
  for (std::size_t i = 0; i < dim; ++i) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (in.gcount() != static_cast<std::streamsize>(buffer.size()))
      fail(Errc::format, "truncated ciphertext body");
    for (std::size_t j = 0; j < dim; ++j) {
      std::uint64_t word = 0;
      for (int k = 7; k >= 0; --k) word = (word << 8) | static_cast<unsigned char>(buffer[8 * j + k]);
      if (word > 1) fail(Errc::format, "gsw ciphertext body entry is not binary");
      rows[i * stride + j / ell] |= word << (j % ell);
    }
  }
  const std::uint64_t noise = io::read_u64(in);
  const std::uint64_t magnitude = io::read_u64(in);
  return Ciphertext::make_gsw(params, std::move(rows), noise, magnitude);
}

void write_secret_key(std::ostream& out, const SecretKey& sk) {
  io::write_magic(out, "CSURF-SK");
  io::write_u8(out, kFormatVersion);
  write_params(out, sk.params, sk.backend);
  io::write_u64(out, sk.params.sigma);
  io::write_u64(out, sk.s.size());
  for (auto v : sk.s) io::write_u64(out, v);
  if (!out) fail(Errc::io, "failed writing secret key");
}

SecretKey read_secret_key(std::istream& in) {
  io::expect_magic(in, "CSURF-SK", "secret key");
  read_version(in);
  const ParamsBlock block = read_params(in);
  SecretKey sk;
  sk.params = block.params;
  sk.backend = block.backend;
  sk.params.sigma = io::read_u64(in);
  const std::uint64_t count = io::read_u64(in);
  const std::uint64_t expected = block.backend == Backend::gsw ? sk.params.n + 1 : 0;
  if (count != expected) fail(Errc::format, "secret key has the wrong number of elements");
  sk.s.resize(count);
  for (auto& v : sk.s) {
    v = io::read_u64(in);
    if (v >= sk.params.q) fail(Errc::format, "secret key element outside [0, q)");
  }
  return sk;
}

void write_public_key(std::ostream& out, const PublicKey& pk) {
  io::write_magic(out, "CSURF-PK");
  io::write_u8(out, kFormatVersion);
  write_params(out, pk.params, pk.backend);
  io::write_u64(out, pk.params.sigma);
  io::write_u64(out, pk.samples);
  const std::size_t width = static_cast<std::size_t>(pk.params.n + 1);
  for (std::size_t r = 0; r < pk.samples; ++r)
    for (std::size_t j = 0; j < width; ++j) io::write_u64(out, pk.a[r * pk.stride() + j]);
  if (!out) fail(Errc::io, "failed writing public key");
}

PublicKey read_public_key(std::istream& in) {
  io::expect_magic(in, "CSURF-PK", "public key");
  read_version(in);
  const ParamsBlock block = read_params(in);
  PublicKey pk;
  pk.params = block.params;
  pk.backend = block.backend;
  pk.params.sigma = io::read_u64(in);
  pk.samples = static_cast<std::size_t>(io::read_u64(in));
  if (block.backend == Backend::mirror ? pk.samples != 0 : pk.samples > (std::size_t{1} << 20))
    fail(Errc::format, "public key sample count out of range");
  const std::size_t width = static_cast<std::size_t>(pk.params.n + 1);
  pk.a.assign(pk.samples * pk.stride(), 0);
  for (std::size_t r = 0; r < pk.samples; ++r)
    for (std::size_t j = 0; j < width; ++j) {
      const std::uint64_t v = io::read_u64(in);
      if (v >= pk.params.q) fail(Errc::format, "public key element outside [0, q)");
      pk.a[r * pk.stride() + j] = v;
    }
  return pk;
}

void save_key_pair(const std::filesystem::path& dir, const KeyPair& keys) {
  std::filesystem::create_directories(dir);
  auto sk = io::open_output(dir / kSecretKeyFile);
  write_secret_key(sk, keys.secret);
  auto pk = io::open_output(dir / kPublicKeyFile);
  write_public_key(pk, keys.pub);
}

KeyPair load_key_pair(const std::filesystem::path& dir) {
  KeyPair keys;
  auto sk = io::open_input(dir / kSecretKeyFile);
  keys.secret = read_secret_key(sk);
  keys.pub = load_public_key(dir);
  if (keys.secret.backend != keys.pub.backend || !keys.secret.params.compatible(keys.pub.params))
    fail(Errc::format, "secret and public key in " + dir.string() + " do not belong together");
  return keys;
}

PublicKey load_public_key(const std::filesystem::path& dir) {
  auto in = io::open_input(dir / kPublicKeyFile);
  return read_public_key(in);
}

}  // namespace csurf::fhe
