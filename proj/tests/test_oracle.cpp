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

#include "pdpu/oracle.hpp"

#include <algorithm>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace pdpu;
using pdpu_test::random_pattern;

namespace {
const PositFormat kP82(8, 2);
}

TEST_CASE("oracle anchors") {
  PdpuConfig cfg(kP82, kP82, 1, 14, DotMode::kFused);
  std::vector<PositBits> z = {zero_pattern(kP82)};
  CHECK(oracle_fused_dot(cfg, z, z, zero_pattern(kP82)).is_zero_pattern());
  std::vector<PositBits> one = {one_pattern(kP82)};
  CHECK(oracle_fused_dot(cfg, one, one, zero_pattern(kP82)).bits == 0x40);
  std::vector<PositBits> nar = {nar_pattern(kP82)};
  CHECK(oracle_fused_dot(cfg, nar, one, zero_pattern(kP82)).is_nar_pattern());
  std::vector<PositBits> two = {one_pattern(kP82)};
  CHECK_THROWS_AS(
      oracle_fused_dot(PdpuConfig(kP82, kP82, 2, 14, DotMode::kFused), one,
                       one, zero_pattern(kP82)),
      LengthMismatch);
}

TEST_CASE("rounding an exact lattice point returns that point") {
  for (PositFormat fmt :
       {PositFormat(6, 1), kP82, PositFormat(10, 0), PositFormat(12, 3)}) {
    for (uint32_t b = 0; b < (uint32_t{1} << fmt.n); ++b) {
      PositBits p(fmt, b);
      REQUIRE(encode_exact(to_exact(p), fmt) == p);
    }
  }
}

TEST_CASE("oracle is permutation invariant") {
  std::mt19937_64 rng(103);
  PdpuConfig cfg(kP82, kP82, 6, 14, DotMode::kFused);
  for (int i = 0; i < 1000; ++i) {
    std::vector<PositBits> va, vb;
    for (int t = 0; t < 6; ++t) {
      va.push_back(random_pattern(rng, kP82));
      vb.push_back(random_pattern(rng, kP82));
    }
    PositBits acc = random_pattern(rng, kP82);
    PositBits base = oracle_fused_dot(cfg, va, vb, acc);
    std::vector<size_t> idx = {0, 1, 2, 3, 4, 5};
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<PositBits> pa, pb;
    for (size_t j : idx) {
      pa.push_back(va[j]);
      pb.push_back(vb[j]);
    }
    REQUIRE(oracle_fused_dot(cfg, pa, pb, acc) == base);
  }
}

TEST_CASE("fma schedule with N=1 equals the fused oracle") {
  std::mt19937_64 rng(104);
  PdpuConfig cfg(kP82, kP82, 1, 14, DotMode::kFused);
  for (int i = 0; i < 3000; ++i) {
    std::vector<PositBits> va = {random_pattern(rng, kP82)};
    std::vector<PositBits> vb = {random_pattern(rng, kP82)};
    PositBits acc = random_pattern(rng, kP82);
    REQUIRE(oracle_step_rounded_dot(cfg, va, vb, acc, Schedule::kFma) ==
            oracle_fused_dot(cfg, va, vb, acc));
  }
}

TEST_CASE("quire-mode engine cross-validates the oracle on P(8,2)") {
  std::mt19937_64 rng(105);
  PdpuConfig cfg(kP82, kP82, 4, 14, DotMode::kQuire);
  for (int i = 0; i < 5000; ++i) {
    std::vector<PositBits> va, vb;
    for (int t = 0; t < 4; ++t) {
      va.push_back(random_pattern(rng, kP82));
      vb.push_back(random_pattern(rng, kP82));
    }
    PositBits acc = random_pattern(rng, kP82);
    REQUIRE(oracle_fused_dot(cfg, va, vb, acc) ==
            pdpu_dot(cfg, va, vb, acc));
  }
}

TEST_CASE("test vector lines round trip") {
  std::mt19937_64 rng(106);
  for (int i = 0; i < 500; ++i) {
    TestVector tv;
    tv.cfg = PdpuConfig(PositFormat(13, 2), PositFormat(16, 2), 3, 14,
                        DotMode::kFused);
    for (int t = 0; t < 3; ++t) {
      tv.va.push_back(random_pattern(rng, tv.cfg.in_fmt));
      tv.vb.push_back(random_pattern(rng, tv.cfg.in_fmt));
    }
    tv.acc = random_pattern(rng, tv.cfg.out_fmt);
    tv.expected = oracle_fused_dot(tv.cfg, tv.va, tv.vb, tv.acc);
    std::string line = to_line(tv);
    TestVector back = parse_line(line);
    REQUIRE(back.cfg == tv.cfg);
    REQUIRE(back.va == tv.va);
    REQUIRE(back.vb == tv.vb);
    REQUIRE(back.acc == tv.acc);
    REQUIRE(back.expected == tv.expected);
    REQUIRE(to_line(back) == line);
  }
  CHECK_THROWS_AS(parse_line("13,2 16,2 2 14 fused 0040"), FormatError);
  CHECK_THROWS_AS(parse_line("junk"), FormatError);
}

TEST_CASE("example line from the shared format parses") {
  // 1.0*1.0 + 2.0*0.5 + 0 = 2.0 = 0x48 under every schedule.
  TestVector tv = parse_line("8,2 8,2 2 14 muladd 40 48 40 38 00 48");
  CHECK(tv.cfg.n_terms == 2);
  CHECK(tv.cfg.mode == DotMode::kDiscreteMulAdd);
  CHECK(tv.va[0].bits == 0x40);
  CHECK(tv.vb[1].bits == 0x38);
  CHECK(run_dot(tv.cfg, tv.va, tv.vb, tv.acc) == tv.expected);
  CHECK(oracle_for_mode(tv.cfg, tv.va, tv.vb, tv.acc) == tv.expected);
}
