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

#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "pdpu/format.hpp"

namespace pdpu {

/// Unpacked posit: sign, power-of-two scale (k*2^es + e), and the mantissa
/// 1.m as a fixed-point integer with the hidden bit at position frac_width.
/// The fraction is zero-padded to the format's fixed frac_width so that the
/// downstream datapath sees one width per format, as hardware would.
struct DecodedPosit {
  int sign = +1;
  int32_t scale = 0;
  uint64_t frac = 0;
  int frac_width = 0;
  bool is_zero = false;
  bool is_nar = false;
};

/// A normalized value awaiting rounding: mantissa has its top (hidden) bit
/// at position width-1 and carries weight 2^scale. `sticky` records any
/// nonzero bits already discarded below the kept width.
struct UnroundedValue {
  int sign = +1;
  int32_t scale = 0;
  uint64_t mantissa = 0;
  int width = 1;
  bool sticky = false;
  bool is_zero = false;
  bool is_nar = false;
};

namespace detail {

// Field walk shared by decode() and inspect(). The pattern must be a
// positive magnitude (sign bit clear) and neither zero nor NaR.
struct RawFields {
  int regime_run;  // m
  int k;
  int exponent;  // e, missing low bits read as 0
  uint32_t frac_field;
  int frac_bits;  // bits physically present
};

inline RawFields walk_fields(uint32_t mag, PositFormat fmt) {
  const int n = fmt.n, es = fmt.es;
  const int bw = n - 1;
  uint32_t body = mag & (fmt.bit_mask() >> 1);
  uint64_t aligned = static_cast<uint64_t>(body) << (64 - bw);
  bool run_of_ones = (aligned >> 63) & 1;
  int m = run_of_ones ? std::countl_one(aligned) : std::countl_zero(aligned);
  if (m > bw) m = bw;
  RawFields rf;
  rf.regime_run = m;
  rf.k = run_of_ones ? m - 1 : -m;
  int rem = bw - std::min(m + 1, bw);
  int t = std::min(es, rem);
  uint32_t e_field = t ? (body >> (rem - t)) & ((1u << t) - 1) : 0;
  rf.exponent = static_cast<int>(e_field) << (es - t);
  rf.frac_bits = rem - t;
  rf.frac_field = rf.frac_bits ? body & ((1u << rf.frac_bits) - 1) : 0;
  return rf;
}

}  // namespace detail

/// Decodes any n-bit pattern. Negative inputs are two's-complemented before
/// field extraction; a regime that crowds out exponent bits leaves the
/// missing low exponent bits at zero.
inline DecodedPosit decode(const PositBits& p) {
  const PositFormat fmt = p.fmt;
  DecodedPosit d;
  d.frac_width = fmt.frac_width();
  if (p.is_zero_pattern()) {
    d.is_zero = true;
    return d;
  }
  if (p.is_nar_pattern()) {
    d.is_nar = true;
    return d;
  }
  bool neg = (p.bits & fmt.sign_mask()) != 0;
  uint32_t mag = neg ? (~p.bits + 1) & fmt.bit_mask() : p.bits;
  auto rf = detail::walk_fields(mag, fmt);
  d.sign = neg ? -1 : +1;
  d.scale = rf.k * (1 << fmt.es) + rf.exponent;
  d.frac = ((uint64_t{1} << rf.frac_bits) | rf.frac_field)
           << (d.frac_width - rf.frac_bits);
  return d;
}

/// Rounds to nearest on the posit encoding lattice, ties to the pattern with
/// even last bit; bits that fall off the n-bit encoding (fraction, and the
/// low exponent bits when the regime is long) act as guard/sticky, matching
/// SoftPosit. Magnitudes beyond maxpos/minpos saturate; posits never round a
/// nonzero value to zero or to NaR.
inline PositBits encode(const UnroundedValue& v, PositFormat fmt) {
  if (v.is_nar) return nar_pattern(fmt);
  if (v.is_zero) return zero_pattern(fmt);
  assert(v.width >= 1 && v.width <= 64);
  assert((v.mantissa >> (v.width - 1)) == 1);
  const int n = fmt.n, es = fmt.es;
  const int smax = fmt.scale_max();
  uint32_t body;
  if (v.scale >= smax) {
    body = fmt.sign_mask() - 1;  // maxpos
  } else if (v.scale < -smax) {
    body = 1;  // minpos
  } else {
    int k = v.scale >> es;  // floor division, es may be 0
    int e = v.scale - (k << es);
    int rlen;
    uint32_t rfield;
    if (k >= 0) {
      rlen = k + 2;
      rfield = ((2u << k) - 1) << 1;  // k+1 ones, then 0
    } else {
      rlen = -k + 1;
      rfield = 1;  // -k zeros, then 1
    }
    int rb = (n - 1) - rlen;  // room for exponent + fraction
    assert(rb >= 0);
    int fbits = v.width - 1;
    uint64_t frac = fbits ? v.mantissa & ((uint64_t{1} << fbits) - 1) : 0;
    unsigned __int128 tail =
        (static_cast<unsigned __int128>(static_cast<unsigned>(e)) << fbits) |
        frac;
    int tl = es + fbits;
    bool guard = false, sticky = v.sticky;
    uint64_t tail_kept;
    if (tl <= rb) {
      tail_kept = static_cast<uint64_t>(tail) << (rb - tl);
    } else {
      int cut = tl - rb;
      tail_kept = static_cast<uint64_t>(tail >> cut);
      guard = (tail >> (cut - 1)) & 1;
      if (cut > 1)
        sticky = sticky ||
                 (tail & ((static_cast<unsigned __int128>(1) << (cut - 1)) -
                          1)) != 0;
    }
    body = (rfield << rb) | static_cast<uint32_t>(tail_kept);
    if (guard && (sticky || (body & 1))) body += 1;
  }
  uint32_t bits = v.sign < 0 ? (~body + 1) & fmt.bit_mask() : body;
  return {fmt, bits};
}

/// Two's complement over n bits; zero and NaR are fixed points.
inline PositBits negate(const PositBits& p) {
  return {p.fmt, (~p.bits + 1) & p.fmt.bit_mask()};
}

/// Lifts a decoded posit back to an exact (sticky-free) unrounded value,
/// the identity leg of the round-trip property.
inline UnroundedValue to_unrounded(const DecodedPosit& d) {
  UnroundedValue v;
  v.is_zero = d.is_zero;
  v.is_nar = d.is_nar;
  if (d.is_zero || d.is_nar) return v;
  v.sign = d.sign;
  v.scale = d.scale;
  v.mantissa = d.frac;
  v.width = d.frac_width + 1;
  return v;
}

/// Raw field view (regime run length, k, exponent, fraction) of a pattern;
/// what the decode stage of the datapath extracts, exposed for inspection.
struct PositFields {
  bool negative = false;
  int regime_run = 0;
  int k = 0;
  int exponent = 0;
  uint32_t frac_field = 0;
  int frac_bits = 0;
  bool is_zero = false;
  bool is_nar = false;
};

inline PositFields inspect(const PositBits& p) {
  PositFields f;
  if (p.is_zero_pattern()) {
    f.is_zero = true;
    return f;
  }
  if (p.is_nar_pattern()) {
    f.is_nar = true;
    return f;
  }
  f.negative = (p.bits & p.fmt.sign_mask()) != 0;
  uint32_t mag = f.negative ? (~p.bits + 1) & p.fmt.bit_mask() : p.bits;
  auto rf = detail::walk_fields(mag, p.fmt);
  f.regime_run = rf.regime_run;
  f.k = rf.k;
  f.exponent = rf.exponent;
  f.frac_field = rf.frac_field;
  f.frac_bits = rf.frac_bits;
  return f;
}

/// Approximate real value; saturates to +/-inf outside double range and
/// returns NaN for NaR. Metrics only -- exact semantics live in ExactValue.
inline double to_double(const DecodedPosit& d) {
  if (d.is_nar) return std::nan("");
  if (d.is_zero) return 0.0;
  double m = std::ldexp(static_cast<double>(d.frac), -d.frac_width);
  return d.sign * std::ldexp(m, d.scale);
}

inline double to_double(const PositBits& p) { return to_double(decode(p)); }

/// Exact double -> posit conversion (doubles are dyadic, so no sticky).
inline PositBits from_double(double x, PositFormat fmt) {
  if (std::isnan(x) || std::isinf(x)) return nar_pattern(fmt);
  UnroundedValue v;
  if (x == 0.0) {
    v.is_zero = true;
    return encode(v, fmt);
  }
  v.sign = x < 0 ? -1 : +1;
  int ex;
  double fr = std::frexp(std::fabs(x), &ex);
  v.mantissa = static_cast<uint64_t>(std::ldexp(fr, 53));
  v.width = 53;
  v.scale = ex - 1;
  return encode(v, fmt);
}

}  // namespace pdpu
