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
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pdpu {

/// Unbounded unsigned integer. Base 2^32 limbs, little endian, canonical
/// form keeps no leading zero limbs (zero is the empty limb vector).
///
/// Only what the exact oracle needs: add/sub/mul, shifts, compare, and a
/// plain binary long division for decimal input conversion.
class BigUint {
 public:
  BigUint() = default;

  static BigUint from_u64(uint64_t v) {
    BigUint r;
    if (v) r.limbs_.push_back(static_cast<uint32_t>(v));
    if (v >> 32) r.limbs_.push_back(static_cast<uint32_t>(v >> 32));
    return r;
  }

  bool is_zero() const { return limbs_.empty(); }

  int bit_length() const {
    if (limbs_.empty()) return 0;
    return static_cast<int>(limbs_.size()) * 32 -
           std::countl_zero(limbs_.back());
  }

  bool bit(int pos) const {
    size_t limb = static_cast<size_t>(pos) / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (pos % 32)) & 1;
  }

  uint64_t to_u64() const {
    uint64_t v = limbs_.empty() ? 0 : limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<uint64_t>(limbs_[1]) << 32;
    return v;
  }

  /// -1 / 0 / +1 three-way compare.
  static int compare(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
  }

  friend bool operator==(const BigUint& a, const BigUint& b) {
    return a.limbs_ == b.limbs_;
  }
  friend bool operator<(const BigUint& a, const BigUint& b) {
    return compare(a, b) < 0;
  }

  friend BigUint operator+(const BigUint& a, const BigUint& b) {
    BigUint r;
    size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.reserve(n + 1);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
      uint64_t s = carry + a.limb(i) + b.limb(i);
      r.limbs_.push_back(static_cast<uint32_t>(s));
      carry = s >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    return r;
  }

  /// Requires a >= b.
  friend BigUint operator-(const BigUint& a, const BigUint& b) {
    assert(compare(a, b) >= 0);
    BigUint r;
    r.limbs_.reserve(a.limbs_.size());
    int64_t borrow = 0;
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      int64_t d = static_cast<int64_t>(a.limb(i)) - b.limb(i) - borrow;
      borrow = d < 0;
      if (d < 0) d += int64_t{1} << 32;
      r.limbs_.push_back(static_cast<uint32_t>(d));
    }
    r.canonicalize();
    return r;
  }

  friend BigUint operator*(const BigUint& a, const BigUint& b) {
    if (a.is_zero() || b.is_zero()) return {};
    BigUint r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        uint64_t cur = r.limbs_[i + j] + carry +
                       static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j];
        r.limbs_[i + j] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      r.limbs_[i + b.limbs_.size()] = static_cast<uint32_t>(carry);
    }
    r.canonicalize();
    return r;
  }

  friend BigUint operator<<(const BigUint& a, int shift) {
    assert(shift >= 0);
    if (a.is_zero() || shift == 0) return a;
    BigUint r;
    int ls = shift / 32, bs = shift % 32;
    r.limbs_.assign(a.limbs_.size() + static_cast<size_t>(ls) + 1, 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      uint64_t v = static_cast<uint64_t>(a.limbs_[i]) << bs;
      r.limbs_[i + static_cast<size_t>(ls)] |= static_cast<uint32_t>(v);
      r.limbs_[i + static_cast<size_t>(ls) + 1] |=
          static_cast<uint32_t>(v >> 32);
    }
    r.canonicalize();
    return r;
  }

  friend BigUint operator>>(const BigUint& a, int shift) {
    assert(shift >= 0);
    if (shift == 0) return a;
    int ls = shift / 32, bs = shift % 32;
    if (static_cast<size_t>(ls) >= a.limbs_.size()) return {};
    BigUint r;
    r.limbs_.assign(a.limbs_.size() - static_cast<size_t>(ls), 0);
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
      uint64_t v = a.limbs_[i + static_cast<size_t>(ls)] >> bs;
      if (bs && i + static_cast<size_t>(ls) + 1 < a.limbs_.size())
        v |= static_cast<uint64_t>(a.limbs_[i + static_cast<size_t>(ls) + 1])
             << (32 - bs);
      r.limbs_[i] = static_cast<uint32_t>(v);
    }
    r.canonicalize();
    return r;
  }

  BigUint& mul_u32(uint32_t m) {
    uint64_t carry = 0;
    for (auto& limb : limbs_) {
      uint64_t cur = static_cast<uint64_t>(limb) * m + carry;
      limb = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    canonicalize();
    return *this;
  }

  BigUint& add_u32(uint32_t v) {
    uint64_t carry = v;
    for (auto& limb : limbs_) {
      uint64_t cur = limb + carry;
      limb = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      if (!carry) break;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
  }

  /// In-place divide by a small divisor, returns the remainder.
  uint32_t divmod_u32(uint32_t d) {
    assert(d != 0);
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
      uint64_t cur = (rem << 32) | limbs_[i];
      limbs_[i] = static_cast<uint32_t>(cur / d);
      rem = cur % d;
    }
    canonicalize();
    return static_cast<uint32_t>(rem);
  }

  /// Binary long division; fine for the modest operand sizes here.
  static std::pair<BigUint, BigUint> divmod(const BigUint& num,
                                            const BigUint& den) {
    assert(!den.is_zero());
    if (compare(num, den) < 0) return {BigUint{}, num};
    int shift = num.bit_length() - den.bit_length();
    BigUint d = den << shift;
    BigUint q, r = num;
    for (int i = shift; i >= 0; --i) {
      q = q << 1;
      if (compare(r, d) >= 0) {
        r = r - d;
        q.add_u32(1);
      }
      d = d >> 1;
    }
    return {q, r};
  }

  static BigUint pow10(int e) {
    BigUint r = from_u64(1);
    for (int i = 0; i < e; ++i) r.mul_u32(10);
    return r;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    BigUint t = *this;
    std::string out;
    while (!t.is_zero()) {
      uint32_t chunk = t.divmod_u32(1000000000u);
      for (int i = 0; i < 9 && !(t.is_zero() && chunk == 0); ++i) {
        out.push_back(static_cast<char>('0' + chunk % 10));
        chunk /= 10;
      }
    }
    return {out.rbegin(), out.rend()};
  }

 private:
  uint32_t limb(size_t i) const { return i < limbs_.size() ? limbs_[i] : 0; }

  void canonicalize() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<uint32_t> limbs_;
};

}  // namespace pdpu
