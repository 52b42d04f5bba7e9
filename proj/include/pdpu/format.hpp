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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pdpu {

/// Thrown when a posit format or a bit pattern violates its constraints.
struct FormatError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A posit encoding P(n,es): word size n and exponent field size es.
///
/// n is capped at 32 and es at min(7, n-2) so that every field fits in
/// 64-bit machine words (the wide accumulator is the only multiword path).
struct PositFormat {
  int n = 8;
  int es = 0;

  PositFormat() = default;
  PositFormat(int n_, int es_) : n(n_), es(es_) {
    if (n < 2 || n > 32) throw FormatError("posit width must be in [2,32]");
    if (es < 0 || es > 7 || es > n - 2)
      throw FormatError("posit es must be in [0, min(7, n-2)]");
  }

  friend bool operator==(const PositFormat&, const PositFormat&) = default;

  /// useed = 2^(2^es); exposed as its log2 to avoid overflow at es=7.
  int useed_log2() const { return 1 << es; }

  /// Largest regime scale: maxpos = 2^((n-2)*2^es).
  int scale_max() const { return (n - 2) << es; }
  int scale_min() const { return -scale_max(); }

  /// Fixed fraction width used by the decoder: the widest fraction any
  /// pattern of this format can carry, floored at 1 for tiny formats.
  /// Shorter actual fractions are zero-padded up to this width.
  int frac_width() const {
    int fw = n - es - 3;
    return fw < 1 ? 1 : fw;
  }

  uint32_t bit_mask() const {
    return n == 32 ? 0xFFFFFFFFu : ((uint32_t{1} << n) - 1);
  }
  uint32_t sign_mask() const { return uint32_t{1} << (n - 1); }

  /// Hex width used when printing patterns of this format.
  int hex_digits() const { return (n + 3) / 4; }
};

/// An n-bit posit pattern tagged with its format. Only the low n bits of
/// `bits` are significant; the rest are kept zero.
struct PositBits {
  PositFormat fmt;
  uint32_t bits = 0;

  PositBits() = default;
  PositBits(PositFormat f, uint32_t b) : fmt(f), bits(b) {
    if (b & ~f.bit_mask()) throw FormatError("pattern wider than posit word");
  }

  friend bool operator==(const PositBits&, const PositBits&) = default;

  bool is_zero_pattern() const { return bits == 0; }
  bool is_nar_pattern() const { return bits == fmt.sign_mask(); }
};

inline PositBits zero_pattern(PositFormat fmt) { return {fmt, 0}; }
inline PositBits nar_pattern(PositFormat fmt) {
  return {fmt, fmt.sign_mask()};
}
inline PositBits maxpos_pattern(PositFormat fmt) {
  return {fmt, fmt.sign_mask() - 1};
}
inline PositBits minpos_pattern(PositFormat fmt) { return {fmt, 1}; }

/// quire width for exact accumulation, 16*n bits (256 for P(16,*)).
inline int quire_width(PositFormat fmt) { return 16 * fmt.n; }

/// Patterns print as zero-padded hex, MSB first, ceil(n/4) nibbles.
inline std::string to_hex(const PositBits& p) {
  static const char* digits = "0123456789abcdef";
  std::string s(static_cast<size_t>(p.fmt.hex_digits()), '0');
  uint32_t v = p.bits;
  for (auto it = s.rbegin(); it != s.rend(); ++it, v >>= 4)
    *it = digits[v & 0xF];
  return s;
}

inline PositBits parse_hex(const std::string& s, PositFormat fmt) {
  if (s.empty()) throw FormatError("empty hex pattern");
  size_t pos = (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
                   ? 2
                   : 0;
  uint64_t v = 0;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw FormatError("bad hex digit in pattern");
    v = (v << 4) | static_cast<uint64_t>(d);
    if (v > 0xFFFFFFFFull) throw FormatError("hex pattern too wide");
  }
  if (v & ~static_cast<uint64_t>(fmt.bit_mask()))
    throw FormatError("hex pattern wider than posit word");
  return {fmt, static_cast<uint32_t>(v)};
}

/// Parses "n,es", e.g. "16,2".
inline PositFormat parse_format(const std::string& s) {
  size_t comma = s.find(',');
  if (comma == std::string::npos) throw FormatError("format must be 'n,es'");
  try {
    int n = std::stoi(s.substr(0, comma));
    int es = std::stoi(s.substr(comma + 1));
    return {n, es};
  } catch (const std::logic_error&) {
    throw FormatError("format must be 'n,es'");
  }
}

inline std::string format_name(PositFormat fmt) {
  return "P(" + std::to_string(fmt.n) + "," + std::to_string(fmt.es) + ")";
}

}  // namespace pdpu
