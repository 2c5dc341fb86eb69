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

#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "csurf/error.hpp"
#include "csurf/rational/rational.hpp"

using namespace csurf;
using namespace csurf::rational;
using fhe::Backend;
using fhe::FheParams;

namespace {

const fhe::KeyPair& keys_for(Backend b) {
  static const fhe::KeyPair gsw = fhe::keygen(FheParams::toy(), Backend::gsw, 1);
  static const fhe::KeyPair mirror = fhe::keygen(FheParams::toy(), Backend::mirror, 1);
  return b == Backend::gsw ? gsw : mirror;
}

class RationalBackends : public ::testing::TestWithParam<Backend> {
 protected:
  fhe::Rng rng = fhe::make_rng(17);

  EncryptedRational enc(std::int64_t u, std::uint64_t v) {
    return EncryptedRational(fhe::encrypt(keys_for(GetParam()).pub, u, rng), v);
  }
  PlainRational dec(const EncryptedRational& r) { return decrypt_rational(keys_for(GetParam()).secret, r); }
};

// Reference fraction arithmetic on 128-bit integers, no reduction.
struct Frac {
  __int128 u;
  __int128 v;
};

struct Node {
  int kind = 0;  // 0 leaf, 1 add, 2 sub, 3 mul
  std::int64_t u = 0;
  std::uint64_t v = 1;
  std::unique_ptr<Node> l, r;
};

std::unique_ptr<Node> random_node(std::mt19937_64& g, int depth) {
  auto n = std::make_unique<Node>();
  if (depth == 0 || g() % 3 == 0) {
    n->u = static_cast<std::int64_t>(g() % 201) - 100;
    n->v = 1 + g() % 12;
    return n;
  }
  n->kind = 1 + static_cast<int>(g() % 3);
  n->l = random_node(g, depth - 1);
  n->r = random_node(g, depth - 1);
  return n;
}

Frac eval_oracle(const Node& n) {
  if (n.kind == 0) return {n.u, static_cast<__int128>(n.v)};
  const Frac a = eval_oracle(*n.l), b = eval_oracle(*n.r);
  switch (n.kind) {
    case 1: return {a.u * b.v + b.u * a.v, a.v * b.v};
    case 2: return {a.u * b.v - b.u * a.v, a.v * b.v};
    default: return {a.u * b.u, a.v * b.v};
  }
}

}  // namespace

TEST_P(RationalBackends, HalfPlusThird) {
  const auto r = dec(add(enc(1, 2), enc(1, 3)));
  EXPECT_EQ(r, (PlainRational{5, 6}));
}

TEST_P(RationalBackends, SameDenominatorIsNotReduced) {
  const auto r = dec(add(enc(3, 10000), enc(4, 10000)));
  EXPECT_EQ(r.denominator, 100000000u);
  EXPECT_EQ(r.numerator, 70000);
  EXPECT_DOUBLE_EQ(r.to_double(), 7.0 / 10000.0);
}

TEST_P(RationalBackends, ProductKeepsUnreducedForm) {
  EXPECT_EQ(dec(mul(enc(2, 3), enc(3, 2))), (PlainRational{6, 6}));
  EXPECT_EQ(dec(mul(enc(9, 10), enc(9, 10))), (PlainRational{81, 100}));
  EXPECT_EQ(dec(sub(enc(1, 99), enc(1, 99))), (PlainRational{0, 9801}));
  EXPECT_EQ(dec(mul(enc(-2, 99), enc(1, 99))), (PlainRational{-2, 9801}));
}

TEST_P(RationalBackends, ConstMul) {
  EXPECT_EQ(dec(const_mul(enc(7, 5), PlainRational{-3, 4})), (PlainRational{-21, 20}));
}

TEST_P(RationalBackends, WeightedSumSharesOneDenominator) {
  const auto a = from_int(fhe::encrypt(keys_for(GetParam()).pub, 10, rng));
  const auto b = from_int(fhe::encrypt(keys_for(GetParam()).pub, 4, rng));
  const auto c = from_int(fhe::encrypt(keys_for(GetParam()).pub, 10, rng));
  const WeightedTerm terms[] = {{1, &a}, {-2, &b}, {1, &c}};
  const auto r = dec(weighted_sum_common_denominator(terms, 10000));
  EXPECT_EQ(r, (PlainRational{12, 10000}));
}

TEST_P(RationalBackends, WeightedSumRejectsBadInput) {
  EXPECT_THROW(weighted_sum_common_denominator({}, 10000), Error);
  const auto frac = enc(1, 2);
  const WeightedTerm terms[] = {{1, &frac}};
  EXPECT_THROW(weighted_sum_common_denominator(terms, 10000), Error);
}

TEST_P(RationalBackends, DenominatorOverflowIsReported) {
  const std::uint64_t big = std::uint64_t{1} << 30;
  auto a = enc(1, big);
  try {
    (void)mul(a, a);  // 2^60 >= q/2
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::denominator_overflow);
  }
}

TEST_P(RationalBackends, RandomTreesAreExact) {
  std::mt19937_64 g(31);
  int checked = 0;
  for (int i = 0; i < 25; ++i) {
    const auto tree = random_node(g, 1 + static_cast<int>(g() % 3));
    const Frac want = eval_oracle(*tree);
    const std::uint64_t q = FheParams::toy().q;
    if (want.v >= static_cast<__int128>(q / 2)) continue;
    const std::function<EncryptedRational(const Node&)> walk = [&](const Node& n) {
      if (n.kind == 0) return enc(n.u, n.v);
      const auto a = walk(*n.l), b = walk(*n.r);
      return n.kind == 1 ? add(a, b) : n.kind == 2 ? sub(a, b) : mul(a, b);
    };
    const auto got = walk(*tree);
    if (!fhe::decryptable(got.numerator())) continue;
    const auto r = dec(got);
    ASSERT_EQ(static_cast<__int128>(r.denominator), want.v);
    ASSERT_EQ(static_cast<__int128>(r.numerator), want.u);
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST_P(RationalBackends, SerializationRoundTrip) {
  const auto a = enc(-55, 321);
  std::stringstream buf;
  write_encrypted_rational(buf, a);
  const auto b = read_encrypted_rational(buf);
  EXPECT_EQ(dec(b), (PlainRational{-55, 321}));
}

INSTANTIATE_TEST_SUITE_P(Backends, RationalBackends, ::testing::Values(Backend::gsw, Backend::mirror),
                         [](const auto& info) { return std::string(fhe::to_string(info.param)); });

TEST(PlainRational, CheckedArithmetic) {
  EXPECT_EQ(add(PlainRational{1, 2}, PlainRational{1, 3}), (PlainRational{5, 6}));
  EXPECT_EQ(sub(PlainRational{1, 2}, PlainRational{1, 2}), (PlainRational{0, 4}));
  EXPECT_EQ(mul(PlainRational{-2, 3}, PlainRational{3, 2}), (PlainRational{-6, 6}));
  EXPECT_THROW(mul(PlainRational{INT64_MAX, 1}, PlainRational{2, 1}), Error);
  EXPECT_THROW(mul(PlainRational{1, UINT64_MAX}, PlainRational{1, 2}), Error);
  EXPECT_EQ(to_string(PlainRational{-2, 9801}), "-2/9801");
}

TEST(RationalParams, ValidateAgainstModulus) {
  EXPECT_NO_THROW(RationalParams{10000}.validate(std::uint64_t{1} << 56));
  EXPECT_THROW(RationalParams{10000}.validate(std::uint64_t{1} << 32), Error);
  EXPECT_THROW(RationalParams{0}.validate(std::uint64_t{1} << 56), Error);
  // 2 * 100 * 2^34 lies between 2^41 and 2^42
  EXPECT_THROW(RationalParams{1 << 17}.validate(std::uint64_t{1} << 41), Error);
  EXPECT_NO_THROW(RationalParams{1 << 17}.validate(std::uint64_t{1} << 42));
}

TEST(RationalParams, Quantize) {
  EXPECT_EQ(quantize(0.5, 10000), 5000);
  EXPECT_EQ(quantize(-0.00005, 10000), -1);
  EXPECT_EQ(quantize(1.0 / 3.0, 10000), 3333);
  EXPECT_DOUBLE_EQ(RationalParams{10000}.delta(), 0.00005);
}
