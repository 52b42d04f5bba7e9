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

// Test-side reference machinery, independent of the code paths it checks:
// exhaustive posit value tables, a bracket-based rounding reference, and a
// width-masked machine word for instantiating the CSA templates.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "pdpu/exact.hpp"
#include "pdpu/format.hpp"

namespace pdpu_test {

struct TableEntry {
  pdpu::ExactValue value;
  uint32_t bits;
};

// Every finite value of the format (NaR excluded), sorted ascending.
// Enumeration only: keep the format small.
inline std::vector<TableEntry> value_table(pdpu::PositFormat fmt) {
  assert(fmt.n <= 20);
  std::vector<TableEntry> t;
  for (uint64_t b = 0; b < (uint64_t{1} << fmt.n); ++b) {
    pdpu::PositBits p(fmt, static_cast<uint32_t>(b));
    if (p.is_nar_pattern()) continue;
    t.push_back({pdpu::to_exact(p), static_cast<uint32_t>(b)});
  }
  std::sort(t.begin(), t.end(), [](const TableEntry& a, const TableEntry& b) {
    return pdpu::ExactValue::compare(a.value, b.value) < 0;
  });
  return t;
}

// Correct rounding by table scan: nearest on the encoding lattice. Between
// two adjacent n-bit posits the split point is the unique P(n+1,es) value
// strictly inside the bracket; a value exactly on the split goes to the
// pattern with even last bit. Saturation keeps nonzero inputs away from
// zero and inside [-maxpos, maxpos].
class BracketRounder {
 public:
  explicit BracketRounder(pdpu::PositFormat fmt)
      : fmt_(fmt),
        table_(value_table(fmt)),
        fine_(value_table(pdpu::PositFormat(fmt.n + 1, fmt.es))) {}

  uint32_t round(const pdpu::ExactValue& x) const {
    using pdpu::ExactValue;
    if (x.is_zero()) return 0;
    ExactValue minpos = pdpu::to_exact(pdpu::minpos_pattern(fmt_));
    ExactValue maxpos = pdpu::to_exact(pdpu::maxpos_pattern(fmt_));
    if (ExactValue::compare_magnitude(x, minpos) <= 0)
      return x.sign() > 0 ? pdpu::minpos_pattern(fmt_).bits
                          : pdpu::negate(pdpu::minpos_pattern(fmt_)).bits;
    if (ExactValue::compare_magnitude(x, maxpos) >= 0)
      return x.sign() > 0 ? pdpu::maxpos_pattern(fmt_).bits
                          : pdpu::negate(pdpu::maxpos_pattern(fmt_)).bits;
    // Bracket x between adjacent table values.
    size_t lo = 0, hi = table_.size() - 1;
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      int c = ExactValue::compare(table_[mid].value, x);
      if (c == 0) return table_[mid].bits;
      (c < 0 ? lo : hi) = mid;
    }
    if (ExactValue::compare(table_[lo].value, x) == 0) return table_[lo].bits;
    if (ExactValue::compare(table_[hi].value, x) == 0) return table_[hi].bits;
    const ExactValue& split = split_point(table_[lo].value, table_[hi].value);
    int c = ExactValue::compare(x, split);
    if (c < 0) return table_[lo].bits;
    if (c > 0) return table_[hi].bits;
    return (table_[lo].bits & 1) == 0 ? table_[lo].bits : table_[hi].bits;
  }

 private:
  const pdpu::ExactValue& split_point(const pdpu::ExactValue& lo,
                                      const pdpu::ExactValue& hi) const {
    size_t a = 0, b = fine_.size() - 1;
    // First fine value strictly greater than lo; by lattice refinement it
    // is the unique fine value strictly inside (lo, hi).
    while (a < b) {
      size_t mid = (a + b) / 2;
      if (pdpu::ExactValue::compare(fine_[mid].value, lo) <= 0)
        a = mid + 1;
      else
        b = mid;
    }
    assert(pdpu::ExactValue::compare(fine_[a].value, hi) < 0);
    return fine_[a].value;
  }

  pdpu::PositFormat fmt_;
  std::vector<TableEntry> table_;
  std::vector<TableEntry> fine_;
};

// Machine word with width-masked shift, for running the CSA templates on
// plain integers.
struct MaskedWord {
  uint64_t v = 0;
  uint64_t mask = ~uint64_t{0};

  friend MaskedWord operator^(MaskedWord a, MaskedWord b) {
    return {a.v ^ b.v, a.mask};
  }
  friend MaskedWord operator&(MaskedWord a, MaskedWord b) {
    return {a.v & b.v, a.mask};
  }
  friend MaskedWord operator|(MaskedWord a, MaskedWord b) {
    return {a.v | b.v, a.mask};
  }
  friend MaskedWord operator<<(MaskedWord a, int s) {
    return {(a.v << s) & a.mask, a.mask};
  }
};

inline pdpu::PositBits random_pattern(std::mt19937_64& rng,
                                      pdpu::PositFormat fmt) {
  return {fmt, static_cast<uint32_t>(rng()) & fmt.bit_mask()};
}

// Random dyadic value m * 2^e with odd m; the posit lattice is dyadic, so
// these exercise every rounding decision including exact ties.
inline pdpu::ExactValue random_dyadic(std::mt19937_64& rng, int scale_span) {
  uint64_t m = (rng() & ((uint64_t{1} << 50) - 1)) | 1;
  int e = static_cast<int>(rng() % (2 * static_cast<unsigned>(scale_span))) -
          scale_span;
  int sign = rng() & 1 ? -1 : 1;
  return pdpu::ExactValue::from_parts(sign, pdpu::BigUint::from_u64(m), e);
}

}  // namespace pdpu_test
