// Copyright 2026 The pdpu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pdpu/csa.hpp"

#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"

using namespace pdpu;
using pdpu_test::MaskedWord;

TEST_CASE("csa anchors") {
  // [3, 5, 7] compresses to a pair summing to 15 (mod 2^w).
  std::vector<WideInt> xs = {WideInt(8, 3), WideInt(8, 5), WideInt(8, 7)};
  CsaPair p = csa_compress<WideInt>(xs);
  CHECK((p.sum + p.carry).to_u64() == 15);

  // Singletons pass through.
  std::vector<WideInt> one = {WideInt(8, 42)};
  CsaPair q = csa_compress<WideInt>(one);
  CHECK(q.sum.to_u64() == 42);
  CHECK(q.carry.is_zero());

  // Pairs pass through unchanged.
  std::vector<WideInt> two = {WideInt(8, 10), WideInt(8, 20)};
  CsaPair r = csa_compress<WideInt>(two);
  CHECK((r.sum + r.carry).to_u64() == 30);
}

TEST_CASE("csa modular invariant on random wide vectors") {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 10000; ++iter) {
    int width = 8 + static_cast<int>(rng() % 255);
    size_t k = 1 + rng() % 33;
    std::vector<WideInt> xs;
    WideInt expect(width);
    for (size_t i = 0; i < k; ++i) {
      WideInt v = (WideInt(width, rng()) << static_cast<int>(rng() % 64)) |
                  WideInt(width, rng());
      if (rng() & 1) v = v.negated();
      expect = expect + v;
      xs.push_back(v);
    }
    CsaPair p = csa_compress<WideInt>(xs);
    REQUIRE(p.sum + p.carry == expect);
  }
}

TEST_CASE("csa invariant holds at every recursion level") {
  // Compress prefixes of a fixed vector: each prefix length routes through
  // a different mix of 4:2 / 3:2 / passthrough groupings.
  std::mt19937_64 rng(5);
  std::vector<WideInt> xs;
  WideInt expect(100);
  for (int k = 1; k <= 24; ++k) {
    WideInt v(100, rng());
    xs.push_back(v);
    expect = expect + v;
    CsaPair p = csa_compress<WideInt>(xs);
    REQUIRE(p.sum + p.carry == expect);
  }
}

TEST_CASE("compressors run identically on masked machine words") {
  std::mt19937_64 rng(77);
  const uint64_t mask = 0xFF;
  for (int iter = 0; iter < 100000; ++iter) {
    uint64_t a = rng() & mask, b = rng() & mask, c = rng() & mask,
             d = rng() & mask;
    auto p3 = csa32<MaskedWord>({a, mask}, {b, mask}, {c, mask});
    REQUIRE(((p3.sum.v + p3.carry.v) & mask) == ((a + b + c) & mask));
    auto p4 = csa42<MaskedWord>({a, mask}, {b, mask}, {c, mask}, {d, mask});
    REQUIRE(((p4.sum.v + p4.carry.v) & mask) == ((a + b + c + d) & mask));
  }
}

TEST_CASE("tree of four equals the 4:2 compressor") {
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<WideInt> xs;
    for (int i = 0; i < 4; ++i) xs.emplace_back(64, rng());
    CsaPair tree = csa_compress<WideInt>(xs);
    CsaPairT<WideInt> direct = csa42(xs[0], xs[1], xs[2], xs[3]);
    REQUIRE(tree.sum == direct.sum);
    REQUIRE(tree.carry == direct.carry);
  }
}
