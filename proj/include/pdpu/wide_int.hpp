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

#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <string>

namespace pdpu {

/// Fixed-width unsigned integer with two's-complement semantics, modeling a
/// hardware register of `width` bits. Widths up to 768 bits cover the quire
/// accumulator of every supported configuration (16*32 + carry guard).
///
/// All arithmetic is mod 2^width. Storage is inline; objects are cheap to
/// copy and never touch the heap.
class WideInt {
 public:
  static constexpr int kMaxBits = 768;
  static constexpr int kLimbBits = 64;
  static constexpr int kMaxLimbs = kMaxBits / kLimbBits;

  WideInt() : width_(1), nlimbs_(1) { limbs_.fill(0); }

  explicit WideInt(int width, uint64_t value = 0)
      : width_(width), nlimbs_((width + kLimbBits - 1) / kLimbBits) {
    assert(width >= 1 && width <= kMaxBits);
    limbs_.fill(0);
    limbs_[0] = value;
    trim();
  }

  int width() const { return width_; }

  bool is_zero() const {
    for (int i = 0; i < nlimbs_; ++i)
      if (limbs_[i]) return false;
    return true;
  }

  bool bit(int pos) const {
    assert(pos >= 0 && pos < width_);
    return (limbs_[pos / kLimbBits] >> (pos % kLimbBits)) & 1;
  }

  void set_bit(int pos) {
    assert(pos >= 0 && pos < width_);
    limbs_[pos / kLimbBits] |= uint64_t{1} << (pos % kLimbBits);
  }

  /// Sign bit under two's-complement interpretation.
  bool msb() const { return bit(width_ - 1); }

  /// Leading zeros counted within the declared width.
  int leading_zeros() const {
    for (int i = nlimbs_ - 1; i >= 0; --i) {
      if (limbs_[i]) {
        int top = i * kLimbBits + (63 - std::countl_zero(limbs_[i]));
        return width_ - 1 - top;
      }
    }
    return width_;
  }

  uint64_t to_u64() const { return limbs_[0]; }

  /// Top `count` bits (count <= 64), right-aligned in the result.
  uint64_t top_bits(int count) const {
    assert(count >= 1 && count <= 64 && count <= width_);
    uint64_t out = 0;
    for (int i = 0; i < count; ++i)
      out = (out << 1) | static_cast<uint64_t>(bit(width_ - 1 - i));
    return out;
  }

  /// True if any bit strictly below `pos` is set.
  bool any_below(int pos) const {
    assert(pos >= 0 && pos <= width_);
    int full = pos / kLimbBits;
    for (int i = 0; i < full; ++i)
      if (limbs_[i]) return true;
    int rem = pos % kLimbBits;
    if (rem && (limbs_[full] & ((uint64_t{1} << rem) - 1))) return true;
    return false;
  }

  friend WideInt operator+(const WideInt& a, const WideInt& b) {
    assert(a.width_ == b.width_);
    WideInt r(a.width_);
    unsigned __int128 carry = 0;
    for (int i = 0; i < a.nlimbs_; ++i) {
      unsigned __int128 s = carry + a.limbs_[i] + b.limbs_[i];
      r.limbs_[i] = static_cast<uint64_t>(s);
      carry = s >> 64;
    }
    r.trim();
    return r;
  }

  friend WideInt operator-(const WideInt& a, const WideInt& b) {
    return a + b.negated();
  }

  /// Two's complement over `width` bits.
  WideInt negated() const {
    WideInt r(width_);
    unsigned __int128 carry = 1;
    for (int i = 0; i < nlimbs_; ++i) {
      unsigned __int128 s = carry + ~limbs_[i];
      r.limbs_[i] = static_cast<uint64_t>(s);
      carry = s >> 64;
    }
    r.trim();
    return r;
  }

  /// Magnitude of the two's-complement value.
  WideInt magnitude() const { return msb() ? negated() : *this; }

  friend WideInt operator^(const WideInt& a, const WideInt& b) {
    assert(a.width_ == b.width_);
    WideInt r(a.width_);
    for (int i = 0; i < a.nlimbs_; ++i) r.limbs_[i] = a.limbs_[i] ^ b.limbs_[i];
    return r;
  }

  friend WideInt operator&(const WideInt& a, const WideInt& b) {
    assert(a.width_ == b.width_);
    WideInt r(a.width_);
    for (int i = 0; i < a.nlimbs_; ++i) r.limbs_[i] = a.limbs_[i] & b.limbs_[i];
    return r;
  }

  friend WideInt operator|(const WideInt& a, const WideInt& b) {
    assert(a.width_ == b.width_);
    WideInt r(a.width_);
    for (int i = 0; i < a.nlimbs_; ++i) r.limbs_[i] = a.limbs_[i] | b.limbs_[i];
    return r;
  }

  friend WideInt operator<<(const WideInt& a, int shift) {
    assert(shift >= 0);
    WideInt r(a.width_);
    if (shift >= a.width_) return r;
    int ls = shift / kLimbBits, bs = shift % kLimbBits;
    for (int i = a.nlimbs_ - 1; i >= ls; --i) {
      uint64_t v = a.limbs_[i - ls] << bs;
      if (bs && i - ls - 1 >= 0) v |= a.limbs_[i - ls - 1] >> (64 - bs);
      r.limbs_[i] = v;
    }
    r.trim();
    return r;
  }

  friend WideInt operator>>(const WideInt& a, int shift) {
    assert(shift >= 0);
    WideInt r(a.width_);
    if (shift >= a.width_) return r;
    int ls = shift / kLimbBits, bs = shift % kLimbBits;
    for (int i = 0; i + ls < a.nlimbs_; ++i) {
      uint64_t v = a.limbs_[i + ls] >> bs;
      if (bs && i + ls + 1 < a.nlimbs_) v |= a.limbs_[i + ls + 1] << (64 - bs);
      r.limbs_[i] = v;
    }
    return r;
  }

  friend bool operator==(const WideInt& a, const WideInt& b) {
    if (a.width_ != b.width_) return false;
    for (int i = 0; i < a.nlimbs_; ++i)
      if (a.limbs_[i] != b.limbs_[i]) return false;
    return true;
  }

  /// Unsigned comparison.
  friend bool operator<(const WideInt& a, const WideInt& b) {
    assert(a.width_ == b.width_);
    for (int i = a.nlimbs_ - 1; i >= 0; --i)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i];
    return false;
  }

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    int nib = (width_ + 3) / 4;
    std::string s(static_cast<size_t>(nib), '0');
    for (int i = 0; i < nib; ++i) {
      uint64_t limb = limbs_[i / 16];
      s[static_cast<size_t>(nib - 1 - i)] = digits[(limb >> (4 * (i % 16))) & 0xF];
    }
    return s;
  }

 private:
  void trim() {
    int rem = width_ % kLimbBits;
    if (rem) limbs_[nlimbs_ - 1] &= (uint64_t{1} << rem) - 1;
    for (int i = nlimbs_; i < kMaxLimbs; ++i) limbs_[i] = 0;
  }

  int width_;
  int nlimbs_;
  std::array<uint64_t, kMaxLimbs> limbs_;
};

}  // namespace pdpu
