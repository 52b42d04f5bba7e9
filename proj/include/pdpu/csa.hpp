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

#pragma once

#include <cassert>
#include <span>
#include <utility>
#include <vector>

#include "pdpu/wide_int.hpp"

namespace pdpu {

/// Redundant sum/carry pair; (sum + carry) mod 2^w equals the compressed
/// addends' modular sum.
template <typename W>
struct CsaPairT {
  W sum;
  W carry;
};

using CsaPair = CsaPairT<WideInt>;

/// 3:2 compressor: one full-adder row. Word type W needs ^ & | and a
/// width-preserving << (WideInt, or any masked machine word).
template <typename W>
inline CsaPairT<W> csa32(const W& a, const W& b, const W& c) {
  W sum = a ^ b ^ c;
  W carry = ((a & b) | (a & c) | (b & c)) << 1;
  return {sum, carry};
}

/// 4:2 compressor as two chained full-adder rows.
template <typename W>
inline CsaPairT<W> csa42(const W& a, const W& b, const W& c, const W& d) {
  CsaPairT<W> first = csa32(a, b, c);
  return csa32(first.sum, first.carry, d);
}

/// Recursive carry-save reduction: each level feeds groups of four into 4:2
/// compressors, a residual group of three into a 3:2 compressor, and passes
/// pairs/singles through, until two vectors remain.
template <typename W>
CsaPairT<W> csa_compress(std::span<const W> addends) {
  assert(!addends.empty());
  if (addends.size() == 1) {
    W zero = addends[0] ^ addends[0];
    return {addends[0], zero};
  }
  std::vector<W> level(addends.begin(), addends.end());
  while (level.size() > 2) {
    std::vector<W> next;
    next.reserve(level.size() / 2 + 2);
    size_t i = 0;
    while (level.size() - i >= 4) {
      CsaPairT<W> p = csa42(level[i], level[i + 1], level[i + 2], level[i + 3]);
      next.push_back(p.sum);
      next.push_back(p.carry);
      i += 4;
    }
    if (level.size() - i == 3) {
      CsaPairT<W> p = csa32(level[i], level[i + 1], level[i + 2]);
      next.push_back(p.sum);
      next.push_back(p.carry);
      i += 3;
    }
    while (i < level.size()) next.push_back(level[i++]);
    level = std::move(next);
  }
  return {level[0], level[1]};
}

}  // namespace pdpu
