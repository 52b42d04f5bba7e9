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
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "pdpu/big_uint.hpp"
#include "pdpu/codec.hpp"
#include "pdpu/format.hpp"

namespace pdpu {

/// Exact dyadic rational: sign * mag * 2^exp2, plus a NaR marker. Every
/// posit value and every finite sum/product of posit values is one of
/// these, so the golden model never rounds until told to.
///
/// Canonical form: mag is odd (trailing zeros folded into exp2) and
/// sign == 0 iff mag == 0.
class ExactValue {
 public:
  ExactValue() = default;

  static ExactValue nar() {
    ExactValue v;
    v.nar_ = true;
    return v;
  }

  static ExactValue from_parts(int sign, BigUint mag, int64_t exp2) {
    ExactValue v;
    if (mag.is_zero() || sign == 0) return v;
    v.sign_ = sign < 0 ? -1 : 1;
    v.mag_ = std::move(mag);
    v.exp2_ = exp2;
    v.normalize();
    return v;
  }

  static ExactValue from_i64(int64_t x) {
    if (x == 0) return {};
    uint64_t m = x < 0 ? -static_cast<uint64_t>(x) : static_cast<uint64_t>(x);
    return from_parts(x < 0 ? -1 : 1, BigUint::from_u64(m), 0);
  }

  /// Doubles are dyadic; the conversion is exact. Non-finite maps to NaR.
  static ExactValue from_double(double x) {
    if (std::isnan(x) || std::isinf(x)) return nar();
    if (x == 0.0) return {};
    int e;
    double fr = std::frexp(std::fabs(x), &e);
    auto mant = static_cast<uint64_t>(std::ldexp(fr, 53));
    return from_parts(x < 0 ? -1 : 1, BigUint::from_u64(mant), e - 53);
  }

  bool is_nar() const { return nar_; }
  bool is_zero() const { return !nar_ && sign_ == 0; }
  int sign() const { return sign_; }
  const BigUint& magnitude() const { return mag_; }
  int64_t exponent() const { return exp2_; }

  /// Numerator magnitude / power-of-two denominator view.
  BigUint numerator_magnitude() const {
    return exp2_ > 0 ? mag_ << static_cast<int>(exp2_) : mag_;
  }
  int64_t denominator_log2() const { return exp2_ < 0 ? -exp2_ : 0; }

  friend ExactValue operator-(const ExactValue& a) {
    ExactValue r = a;
    r.sign_ = -r.sign_;
    return r;
  }

  friend ExactValue operator+(const ExactValue& a, const ExactValue& b) {
    if (a.nar_ || b.nar_) return nar();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int64_t e = std::min(a.exp2_, b.exp2_);
    BigUint ma = a.mag_ << static_cast<int>(a.exp2_ - e);
    BigUint mb = b.mag_ << static_cast<int>(b.exp2_ - e);
    if (a.sign_ == b.sign_) return from_parts(a.sign_, ma + mb, e);
    int cmp = BigUint::compare(ma, mb);
    if (cmp == 0) return {};
    return cmp > 0 ? from_parts(a.sign_, ma - mb, e)
                   : from_parts(b.sign_, mb - ma, e);
  }

  friend ExactValue operator-(const ExactValue& a, const ExactValue& b) {
    return a + (-b);
  }

  friend ExactValue operator*(const ExactValue& a, const ExactValue& b) {
    if (a.nar_ || b.nar_) return nar();
    if (a.is_zero() || b.is_zero()) return {};
    return from_parts(a.sign_ * b.sign_, a.mag_ * b.mag_, a.exp2_ + b.exp2_);
  }

  friend bool operator==(const ExactValue& a, const ExactValue& b) {
    if (a.nar_ || b.nar_) return a.nar_ && b.nar_;
    return a.sign_ == b.sign_ && a.exp2_ == b.exp2_ && a.mag_ == b.mag_;
  }

  /// Three-way compare of real values; NaR is not ordered (assert).
  static int compare(const ExactValue& a, const ExactValue& b) {
    assert(!a.nar_ && !b.nar_);
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    return a.sign_ * compare_magnitude(a, b);
  }

  static int compare_magnitude(const ExactValue& a, const ExactValue& b) {
    assert(!a.nar_ && !b.nar_);
    if (a.is_zero() || b.is_zero())
      return (a.is_zero() ? 0 : 1) - (b.is_zero() ? 0 : 1);
    int64_t hi_a = a.exp2_ + a.mag_.bit_length();
    int64_t hi_b = b.exp2_ + b.mag_.bit_length();
    if (hi_a != hi_b) return hi_a < hi_b ? -1 : 1;
    int64_t e = std::min(a.exp2_, b.exp2_);
    return BigUint::compare(a.mag_ << static_cast<int>(a.exp2_ - e),
                            b.mag_ << static_cast<int>(b.exp2_ - e));
  }

  ExactValue abs() const {
    ExactValue r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  /// Nearest double; saturates outside double range, NaN for NaR.
  double to_double() const {
    if (nar_) return std::nan("");
    if (sign_ == 0) return 0.0;
    int bl = mag_.bit_length();
    int drop = bl > 64 ? bl - 64 : 0;
    uint64_t top = (mag_ >> drop).to_u64();
    // mag is odd, so any dropped tail is nonzero; folding it into the low
    // bit keeps the final 53-bit rounding free of false ties.
    if (drop) top |= 1;
    double e = static_cast<double>(exp2_ + drop);
    if (e > 3000) return sign_ * HUGE_VAL;
    if (e < -3000) return sign_ * 0.0;
    return sign_ * std::ldexp(static_cast<double>(top), static_cast<int>(e));
  }

  /// log2 of the magnitude, accurate to ~1 ulp of double; valid range is far
  /// wider than double's, which is what the accuracy metrics need.
  double log2_abs() const {
    assert(!nar_ && sign_ != 0);
    int bl = mag_.bit_length();
    int drop = bl > 62 ? bl - 62 : 0;
    double m = static_cast<double>((mag_ >> drop).to_u64());
    return std::log2(m) + static_cast<double>(exp2_ + drop);
  }

  /// "num/2^k" or plain integer when k == 0.
  std::string to_string() const {
    if (nar_) return "nar";
    if (sign_ == 0) return "0";
    std::string s = sign_ < 0 ? "-" : "";
    s += numerator_magnitude().to_decimal();
    if (denominator_log2() > 0)
      s += "/2^" + std::to_string(denominator_log2());
    return s;
  }

  /// Exact decimal expansion (posit values are dyadic, so it terminates).
  std::string to_decimal_string() const {
    if (nar_) return "nar";
    if (sign_ == 0) return "0";
    int k = static_cast<int>(denominator_log2());
    BigUint scaled = numerator_magnitude();
    for (int i = 0; i < k; ++i) scaled.mul_u32(5);  // num * 10^k / 2^k
    std::string digits = scaled.to_decimal();
    std::string s = sign_ < 0 ? "-" : "";
    if (k == 0) return s + digits;
    if (static_cast<int>(digits.size()) <= k)
      digits.insert(0, static_cast<size_t>(k) - digits.size() + 1, '0');
    digits.insert(digits.size() - static_cast<size_t>(k), ".");
    return s + digits;
  }

 private:
  void normalize() {
    if (mag_.is_zero()) {
      sign_ = 0;
      exp2_ = 0;
      return;
    }
    int tz = 0;
    while (!mag_.bit(tz)) ++tz;
    if (tz) {
      mag_ = mag_ >> tz;
      exp2_ += tz;
    }
  }

  int sign_ = 0;
  BigUint mag_;
  int64_t exp2_ = 0;
  bool nar_ = false;
};

/// Exact rational value of a pattern; NaR maps to the NaR marker.
inline ExactValue to_exact(const PositBits& p) {
  DecodedPosit d = decode(p);
  if (d.is_nar) return ExactValue::nar();
  if (d.is_zero) return {};
  return ExactValue::from_parts(d.sign, BigUint::from_u64(d.frac),
                                static_cast<int64_t>(d.scale) - d.frac_width);
}

inline ExactValue to_exact(const DecodedPosit& d) {
  if (d.is_nar) return ExactValue::nar();
  if (d.is_zero) return {};
  return ExactValue::from_parts(d.sign, BigUint::from_u64(d.frac),
                                static_cast<int64_t>(d.scale) - d.frac_width);
}

/// Single correctly-rounded conversion to a posit; the oracle's one and
/// only rounding step.
inline PositBits encode_exact(const ExactValue& x, PositFormat fmt) {
  if (x.is_nar()) return nar_pattern(fmt);
  UnroundedValue v;
  if (x.is_zero()) {
    v.is_zero = true;
    return encode(v, fmt);
  }
  const BigUint& mag = x.magnitude();
  int bl = mag.bit_length();
  int keep = bl < 64 ? bl : 64;
  int drop = bl - keep;
  v.sign = x.sign();
  v.mantissa = (mag >> drop).to_u64();
  v.width = keep;
  v.sticky = drop > 0 && !(mag >> drop << drop == mag);
  int64_t scale = x.exponent() + bl - 1;
  // Far outside any posit's scale range; clamp into int32 so encode's
  // saturation logic takes over.
  if (scale > (int64_t{1} << 30)) scale = int64_t{1} << 30;
  if (scale < -(int64_t{1} << 30)) scale = -(int64_t{1} << 30);
  v.scale = static_cast<int32_t>(scale);
  return encode(v, fmt);
}

/// Parses a decimal real ("-12.34e-5", "0.1", "3", "nar") and rounds it
/// once, exactly, to the target format. Long division supplies exact
/// guard/sticky information, so no double-rounding through binary64.
inline PositBits parse_real(const std::string& text, PositFormat fmt) {
  if (text == "nar" || text == "NaR" || text == "inf" || text == "-inf")
    return nar_pattern(fmt);
  size_t pos = 0;
  int sign = 1;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') sign = -1;
    ++pos;
  }
  BigUint digits;
  int frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits.mul_u32(10).add_u32(static_cast<uint32_t>(c - '0'));
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  int exp10 = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    try {
      exp10 = std::stoi(text.substr(pos + 1));
    } catch (const std::logic_error&) {
      throw FormatError("bad exponent in real literal");
    }
    pos = text.size();
  }
  if (!seen_digit || pos != text.size())
    throw FormatError("bad real literal: " + text);
  exp10 -= frac_digits;
  if (digits.is_zero()) return zero_pattern(fmt);

  UnroundedValue v;
  v.sign = sign;
  if (exp10 >= 0) {
    for (int i = 0; i < exp10; ++i) digits.mul_u32(10);
    int bl = digits.bit_length();
    int keep = bl < 64 ? bl : 64;
    int drop = bl - keep;
    v.mantissa = (digits >> drop).to_u64();
    v.width = keep;
    v.sticky = drop > 0 && !(digits >> drop << drop == digits);
    v.scale = bl - 1;
  } else {
    BigUint den = BigUint::pow10(-exp10);
    // Scale the numerator so the quotient carries ~66 significant bits;
    // the remainder is the exact sticky.
    int shift = 66 + den.bit_length() - digits.bit_length();
    if (shift < 0) shift = 0;
    auto [q, r] = BigUint::divmod(digits << shift, den);
    int bl = q.bit_length();
    int keep = bl < 64 ? bl : 64;
    int drop = bl - keep;
    v.mantissa = (q >> drop).to_u64();
    v.width = keep;
    v.sticky = !r.is_zero() || (drop > 0 && !(q >> drop << drop == q));
    v.scale = bl - 1 - shift;
  }
  return encode(v, fmt);
}

}  // namespace pdpu
