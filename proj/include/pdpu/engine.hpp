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

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdpu/codec.hpp"
#include "pdpu/csa.hpp"
#include "pdpu/format.hpp"
#include "pdpu/wide_int.hpp"

namespace pdpu {

struct LengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct FormatMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Accumulation strategies. Fused runs the staged datapath with the
/// configured alignment width; Quire is the same path with the window
/// forced to quire width (exact). The Discrete modes emulate dot products
/// built from separate rounding units.
enum class DotMode { kFused, kQuire, kDiscreteMulAdd, kDiscreteFma };

inline std::string mode_name(DotMode m) {
  switch (m) {
    case DotMode::kFused: return "fused";
    case DotMode::kQuire: return "quire";
    case DotMode::kDiscreteMulAdd: return "muladd";
    case DotMode::kDiscreteFma: return "fma";
  }
  return "?";
}

inline DotMode parse_mode(const std::string& s) {
  if (s == "fused") return DotMode::kFused;
  if (s == "quire") return DotMode::kQuire;
  if (s == "muladd") return DotMode::kDiscreteMulAdd;
  if (s == "fma") return DotMode::kDiscreteFma;
  throw FormatError("unknown mode: " + s);
}

inline int ceil_log2(int x) {
  return x <= 1 ? 0 : std::bit_width(static_cast<unsigned>(x - 1));
}

/// Full engine configuration: input format for the two vectors, output
/// format for the accumulator and result, dot-product size N, alignment
/// width Wm, and accumulation mode.
struct PdpuConfig {
  PositFormat in_fmt;
  PositFormat out_fmt;
  int n_terms = 1;
  int wm = 14;
  DotMode mode = DotMode::kFused;

  PdpuConfig() = default;
  PdpuConfig(PositFormat in, PositFormat out, int n, int wm_, DotMode m)
      : in_fmt(in), out_fmt(out), n_terms(n), wm(wm_), mode(m) {
    if (in.es != out.es)
      throw FormatMismatch("input and output formats must share es");
    if (in.n > out.n)
      throw FormatMismatch("mixed precision requires in.n <= out.n");
    if (n < 1) throw FormatError("dot-product size must be >= 1");
    if (mode == DotMode::kQuire) wm = quire_width(out_fmt);
    if (wm < 4) throw FormatError("alignment width must be >= 4");
    if (acc_width() > WideInt::kMaxBits)
      throw FormatError("accumulator exceeds supported width");
  }

  friend bool operator==(const PdpuConfig&, const PdpuConfig&) = default;

  /// Integer guard bits above the alignment window: carry growth across
  /// N+1 addends plus the product range [1,4) and the sign.
  int guard_offset() const { return ceil_log2(n_terms + 1) + 2; }

  /// Width of the internal two's-complement accumulator.
  int acc_width() const { return wm + guard_offset(); }

  /// Aligned-mantissa field width of a product (two integer bits).
  int product_width() const { return 2 * (in_fmt.frac_width() + 1); }

  /// Aligned-mantissa field width of the accumulator operand, widened by
  /// one zero integer bit so it shares the product field layout.
  int acc_term_width() const { return out_fmt.frac_width() + 2; }

  std::string name() const {
    return "P(" + std::to_string(in_fmt.n) + "/" + std::to_string(out_fmt.n) +
           "," + std::to_string(in_fmt.es) + ")";
  }
};

/// One product a_i*b_i before alignment: raw mantissa product (value in
/// [1,4) with two integer bits), its power-of-two exponent, and flags.
struct ProductTerm {
  int sign = +1;
  int32_t exponent = 0;
  uint64_t mantissa = 0;
  bool is_zero = false;
  bool is_nar = false;
};

struct S1Result {
  std::vector<DecodedPosit> a;
  std::vector<DecodedPosit> b;
  DecodedPosit acc;
  std::vector<int> sign_ab;
  std::vector<int32_t> exp_ab;

  bool any_nar() const {
    if (acc.is_nar) return true;
    for (const auto& d : a)
      if (d.is_nar) return true;
    for (const auto& d : b)
      if (d.is_nar) return true;
    return false;
  }
};

struct S2Result {
  std::vector<ProductTerm> products;
  int32_t e_max = 0;
};

/// A term placed on the alignment window, as a two's-complement integer of
/// the accumulator width.
using AlignedTerm = WideInt;

struct S4Result {
  int sign = +1;      // f_s
  WideInt magnitude;  // s_m
};

/// Per-stage intermediates for the --trace view and stage-level tests.
struct PdpuTrace {
  S1Result s1;
  S2Result s2;
  std::vector<AlignedTerm> aligned;
  CsaPair csa;
  S4Result s4;
  UnroundedValue s5;
  PositBits out;
  bool nar_short_circuit = false;
};

/// S1: decode both vectors and the accumulator, and derive each product's
/// sign and exponent.
inline S1Result s1_decode(const PdpuConfig& cfg, std::span<const PositBits> va,
                          std::span<const PositBits> vb,
                          const PositBits& acc) {
  if (va.size() != vb.size() ||
      va.size() != static_cast<size_t>(cfg.n_terms))
    throw LengthMismatch("operand vectors must have length N");
  for (const auto& p : va)
    if (p.fmt != cfg.in_fmt) throw FormatMismatch("va not in input format");
  for (const auto& p : vb)
    if (p.fmt != cfg.in_fmt) throw FormatMismatch("vb not in input format");
  if (acc.fmt != cfg.out_fmt)
    throw FormatMismatch("acc not in output format");
  S1Result r;
  r.a.reserve(va.size());
  r.b.reserve(vb.size());
  for (size_t i = 0; i < va.size(); ++i) {
    r.a.push_back(decode(va[i]));
    r.b.push_back(decode(vb[i]));
    r.sign_ab.push_back(r.a[i].sign * r.b[i].sign);
    r.exp_ab.push_back(r.a[i].scale + r.b[i].scale);
  }
  r.acc = decode(acc);
  return r;
}

/// S2: exact mantissa products plus the running maximum exponent over all
/// nonzero products and the accumulator (0 when everything is zero).
inline S2Result s2_multiply(const PdpuConfig& cfg, const S1Result& s1) {
  assert(s1.a.size() == static_cast<size_t>(cfg.n_terms));
  S2Result r;
  r.products.reserve(s1.a.size());
  bool have_emax = false;
  for (size_t i = 0; i < s1.a.size(); ++i) {
    ProductTerm t;
    t.sign = s1.sign_ab[i];
    t.exponent = s1.exp_ab[i];
    t.is_zero = s1.a[i].is_zero || s1.b[i].is_zero;
    t.is_nar = s1.a[i].is_nar || s1.b[i].is_nar;
    if (!t.is_zero && !t.is_nar) {
      t.mantissa = s1.a[i].frac * s1.b[i].frac;
      if (!have_emax || t.exponent > r.e_max) r.e_max = t.exponent;
      have_emax = true;
    }
    r.products.push_back(t);
  }
  if (!s1.acc.is_zero && !s1.acc.is_nar) {
    if (!have_emax || s1.acc.scale > r.e_max) r.e_max = s1.acc.scale;
    have_emax = true;
  }
  if (!have_emax) r.e_max = 0;
  return r;
}

namespace detail {

// Places a mantissa field on the Wm window (window MSB has weight
// 2^(e_max+1)), truncating bits shifted beyond it, then applies the sign
// into two's complement of the accumulator width.
inline AlignedTerm align_term(const PdpuConfig& cfg, uint64_t mantissa,
                              int field_width, int sign, int32_t exponent,
                              int32_t e_max) {
  const int wacc = cfg.acc_width();
  int shift = cfg.wm - field_width - (e_max - exponent);
  WideInt w(wacc);
  if (shift >= 0) {
    w = WideInt(wacc, mantissa) << shift;
  } else if (-shift < 64) {
    w = WideInt(wacc, mantissa >> -shift);
  }
  return sign < 0 ? w.negated() : w;
}

}  // namespace detail

/// S3: align every product and the accumulator against e_max. Shifted-out
/// bits are discarded outright; that truncation is the accuracy cost of a
/// narrow window.
inline std::vector<AlignedTerm> s3_align(const PdpuConfig& cfg,
                                         const S2Result& s2,
                                         const DecodedPosit& acc) {
  std::vector<AlignedTerm> terms;
  terms.reserve(s2.products.size() + 1);
  for (const auto& p : s2.products) {
    if (p.is_zero || p.is_nar) {
      terms.emplace_back(cfg.acc_width());
    } else {
      terms.push_back(detail::align_term(cfg, p.mantissa, cfg.product_width(),
                                         p.sign, p.exponent, s2.e_max));
    }
  }
  if (acc.is_zero || acc.is_nar) {
    terms.emplace_back(cfg.acc_width());
  } else {
    terms.push_back(detail::align_term(cfg, acc.frac, cfg.acc_term_width(),
                                       acc.sign, acc.scale, s2.e_max));
  }
  return terms;
}

/// S4: carry-save compression then the single carry-propagate add; returns
/// the final sign and unsigned magnitude.
inline S4Result s4_accumulate(std::span<const AlignedTerm> aligned,
                              CsaPair* csa_out = nullptr) {
  CsaPair pair = csa_compress(aligned);
  if (csa_out) *csa_out = pair;
  WideInt total = pair.sum + pair.carry;
  S4Result r;
  r.sign = total.msb() ? -1 : +1;
  r.magnitude = total.magnitude();
  return r;
}

/// S5: leading-zero count, exponent adjustment, and narrowing to at most 64
/// mantissa bits with an exact sticky for whatever the narrowing drops.
inline UnroundedValue s5_normalize(const PdpuConfig& cfg, const S4Result& s4,
                                   int32_t e_max) {
  UnroundedValue v;
  if (s4.magnitude.is_zero()) {
    v.is_zero = true;
    return v;
  }
  const int wacc = cfg.acc_width();
  int lzc = s4.magnitude.leading_zeros();
  v.sign = s4.sign;
  v.scale = e_max + 1 + cfg.guard_offset() - lzc;
  WideInt normalized = s4.magnitude << lzc;
  v.width = wacc < 64 ? wacc : 64;
  v.mantissa = normalized.top_bits(v.width);
  v.sticky = normalized.any_below(wacc - v.width);
  return v;
}

/// S6: rounding and packing, shared with the codec.
inline PositBits s6_encode(const UnroundedValue& v, PositFormat out_fmt) {
  return encode(v, out_fmt);
}

/// The fused dot product out = round(acc + va.vb): stages S1..S6 with a
/// single rounding at the end. Any NaR among the inputs yields NaR.
inline PositBits pdpu_dot(const PdpuConfig& cfg, std::span<const PositBits> va,
                          std::span<const PositBits> vb, const PositBits& acc,
                          PdpuTrace* trace = nullptr) {
  S1Result s1 = s1_decode(cfg, va, vb, acc);
  if (s1.any_nar()) {
    if (trace) {
      trace->s1 = std::move(s1);
      trace->nar_short_circuit = true;
      trace->out = nar_pattern(cfg.out_fmt);
      return trace->out;
    }
    return nar_pattern(cfg.out_fmt);
  }
  S2Result s2 = s2_multiply(cfg, s1);
  std::vector<AlignedTerm> aligned = s3_align(cfg, s2, s1.acc);
  CsaPair csa;
  S4Result s4 = s4_accumulate(aligned, &csa);
  UnroundedValue v = s5_normalize(cfg, s4, s2.e_max);
  PositBits out = s6_encode(v, cfg.out_fmt);
  if (trace) {
    trace->s1 = std::move(s1);
    trace->s2 = std::move(s2);
    trace->aligned = std::move(aligned);
    trace->csa = std::move(csa);
    trace->s4 = std::move(s4);
    trace->s5 = v;
    trace->out = out;
    trace->nar_short_circuit = false;
  }
  return out;
}

inline PositBits one_pattern(PositFormat fmt) {
  return {fmt, fmt.sign_mask() >> 1};
}

namespace detail {

// A single exactly-rounded operation through the fused path: quire-width
// window, one term, one rounding. The building block of the discrete modes.
inline PdpuConfig single_mac_cfg(PositFormat in, PositFormat out) {
  return {in, out, 1, quire_width(out), DotMode::kQuire};
}

inline PositBits rounded_mul(PositFormat in, PositFormat out,
                             const PositBits& a, const PositBits& b) {
  const PositBits va[1] = {a}, vb[1] = {b};
  return pdpu_dot(single_mac_cfg(in, out), va, vb, zero_pattern(out));
}

inline PositBits rounded_add(PositFormat fmt, const PositBits& x,
                             const PositBits& y) {
  const PositBits va[1] = {x}, vb[1] = {one_pattern(fmt)};
  return pdpu_dot(single_mac_cfg(fmt, fmt), va, vb, y);
}

inline PositBits rounded_mac(PositFormat in, PositFormat out,
                             const PositBits& a, const PositBits& b,
                             const PositBits& acc) {
  const PositBits va[1] = {a}, vb[1] = {b};
  return pdpu_dot(single_mac_cfg(in, out), va, vb, acc);
}

}  // namespace detail

/// Discrete architecture (a): posit multipliers feeding a balanced binary
/// adder tree, every intermediate rounded to the output format, accumulator
/// added last. Reduction order is fixed left-to-right for reproducibility.
inline PositBits discrete_dot_mul_add(const PdpuConfig& cfg,
                                      std::span<const PositBits> va,
                                      std::span<const PositBits> vb,
                                      const PositBits& acc) {
  s1_decode(cfg, va, vb, acc);  // reuse the argument validation
  std::vector<PositBits> level;
  level.reserve(va.size());
  for (size_t i = 0; i < va.size(); ++i)
    level.push_back(detail::rounded_mul(cfg.in_fmt, cfg.out_fmt, va[i], vb[i]));
  while (level.size() > 1) {
    std::vector<PositBits> next;
    next.reserve(level.size() / 2 + 1);
    size_t i = 0;
    for (; i + 1 < level.size(); i += 2)
      next.push_back(detail::rounded_add(cfg.out_fmt, level[i], level[i + 1]));
    if (i < level.size()) next.push_back(level[i]);
    level = std::move(next);
  }
  return detail::rounded_add(cfg.out_fmt, level[0], acc);
}

/// Discrete architecture (b): a chain of fused multiply-add units, one
/// rounding per MAC step.
inline PositBits discrete_dot_fma(const PdpuConfig& cfg,
                                  std::span<const PositBits> va,
                                  std::span<const PositBits> vb,
                                  const PositBits& acc) {
  s1_decode(cfg, va, vb, acc);
  PositBits r = acc;
  for (size_t i = 0; i < va.size(); ++i)
    r = detail::rounded_mac(cfg.in_fmt, cfg.out_fmt, va[i], vb[i], r);
  return r;
}

/// Runs whichever mode the configuration selects.
inline PositBits run_dot(const PdpuConfig& cfg, std::span<const PositBits> va,
                         std::span<const PositBits> vb, const PositBits& acc) {
  switch (cfg.mode) {
    case DotMode::kFused:
    case DotMode::kQuire:
      return pdpu_dot(cfg, va, vb, acc);
    case DotMode::kDiscreteMulAdd:
      return discrete_dot_mul_add(cfg, va, vb, acc);
    case DotMode::kDiscreteFma:
      return discrete_dot_fma(cfg, va, vb, acc);
  }
  throw FormatError("unknown mode");
}

/// Radix-4 Booth multiply: recodes y into digits {-2,-1,0,1,2} and sums the
/// partial products. Behaviorally identical to plain multiplication (the
/// hardware win is fewer partial products); kept as a verified reference
/// for the S2 multiplier. Operands must fit 62 bits.
inline uint64_t booth_multiply(uint64_t x, uint64_t y) {
  __int128 acc = 0;
  for (int i = 0; 2 * i <= 63; ++i) {
    int b0 = i == 0 ? 0 : static_cast<int>((y >> (2 * i - 1)) & 1);
    int b1 = static_cast<int>((y >> (2 * i)) & 1);
    int b2 = 2 * i + 1 < 64 ? static_cast<int>((y >> (2 * i + 1)) & 1) : 0;
    int digit = b0 + b1 - 2 * b2;
    if (digit)
      acc += static_cast<__int128>(digit) * static_cast<__int128>(x)
             << (2 * i);
  }
  return static_cast<uint64_t>(acc);
}

}  // namespace pdpu
