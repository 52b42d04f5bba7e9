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

#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pdpu/engine.hpp"
#include "pdpu/exact.hpp"

namespace pdpu {

struct UnknownSchedule : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Which discrete rounding schedule to replay in exact arithmetic.
enum class Schedule { kMulAdd, kFma };

/// Golden model: acc + sum(a_i * b_i) in exact rationals, rounded once.
inline PositBits oracle_fused_dot(const PdpuConfig& cfg,
                                  std::span<const PositBits> va,
                                  std::span<const PositBits> vb,
                                  const PositBits& acc) {
  if (va.size() != vb.size() ||
      va.size() != static_cast<size_t>(cfg.n_terms))
    throw LengthMismatch("operand vectors must have length N");
  ExactValue sum = to_exact(acc);
  for (size_t i = 0; i < va.size(); ++i)
    sum = sum + to_exact(va[i]) * to_exact(vb[i]);
  return encode_exact(sum, cfg.out_fmt);
}

/// Replays the rounding schedule of a discrete architecture with exact
/// arithmetic between roundings. Must agree bit for bit with the
/// corresponding engine mode; the engine computes through the integer
/// datapath, this path through rationals.
inline PositBits oracle_step_rounded_dot(const PdpuConfig& cfg,
                                         std::span<const PositBits> va,
                                         std::span<const PositBits> vb,
                                         const PositBits& acc,
                                         Schedule schedule) {
  if (va.size() != vb.size() ||
      va.size() != static_cast<size_t>(cfg.n_terms))
    throw LengthMismatch("operand vectors must have length N");
  switch (schedule) {
    case Schedule::kMulAdd: {
      std::vector<PositBits> level;
      level.reserve(va.size());
      for (size_t i = 0; i < va.size(); ++i)
        level.push_back(
            encode_exact(to_exact(va[i]) * to_exact(vb[i]), cfg.out_fmt));
      while (level.size() > 1) {
        std::vector<PositBits> next;
        size_t i = 0;
        for (; i + 1 < level.size(); i += 2)
          next.push_back(encode_exact(
              to_exact(level[i]) + to_exact(level[i + 1]), cfg.out_fmt));
        if (i < level.size()) next.push_back(level[i]);
        level = std::move(next);
      }
      return encode_exact(to_exact(level[0]) + to_exact(acc), cfg.out_fmt);
    }
    case Schedule::kFma: {
      PositBits r = acc;
      for (size_t i = 0; i < va.size(); ++i)
        r = encode_exact(
            to_exact(r) + to_exact(va[i]) * to_exact(vb[i]), cfg.out_fmt);
      return r;
    }
  }
  throw UnknownSchedule("unknown rounding schedule");
}

/// Reference for whatever mode the configuration selects: the fused/quire
/// modes check against the single-rounding oracle, the discrete modes
/// against their step-rounded replay.
inline PositBits oracle_for_mode(const PdpuConfig& cfg,
                                 std::span<const PositBits> va,
                                 std::span<const PositBits> vb,
                                 const PositBits& acc) {
  switch (cfg.mode) {
    case DotMode::kFused:
    case DotMode::kQuire:
      return oracle_fused_dot(cfg, va, vb, acc);
    case DotMode::kDiscreteMulAdd:
      return oracle_step_rounded_dot(cfg, va, vb, acc, Schedule::kMulAdd);
    case DotMode::kDiscreteFma:
      return oracle_step_rounded_dot(cfg, va, vb, acc, Schedule::kFma);
  }
  throw UnknownSchedule("unknown mode");
}

/// One dot-product case in the shared test-vector file format:
///   fmt_in fmt_out N wm mode a_0..a_{N-1} b_0..b_{N-1} acc expected
/// with formats as "n,es" and patterns as bare hex.
struct TestVector {
  PdpuConfig cfg;
  std::vector<PositBits> va;
  std::vector<PositBits> vb;
  PositBits acc;
  PositBits expected;
};

inline std::string to_line(const TestVector& tv) {
  std::ostringstream os;
  os << tv.cfg.in_fmt.n << ',' << tv.cfg.in_fmt.es << ' ' << tv.cfg.out_fmt.n
     << ',' << tv.cfg.out_fmt.es << ' ' << tv.cfg.n_terms << ' ' << tv.cfg.wm
     << ' ' << mode_name(tv.cfg.mode);
  for (const auto& p : tv.va) os << ' ' << to_hex(p);
  for (const auto& p : tv.vb) os << ' ' << to_hex(p);
  os << ' ' << to_hex(tv.acc) << ' ' << to_hex(tv.expected);
  return os.str();
}

inline TestVector parse_line(const std::string& line) {
  std::istringstream is(line);
  std::string in_s, out_s, mode_s;
  int n_terms, wm;
  if (!(is >> in_s >> out_s >> n_terms >> wm >> mode_s))
    throw FormatError("bad test vector line");
  TestVector tv;
  PositFormat in_fmt = parse_format(in_s), out_fmt = parse_format(out_s);
  tv.cfg = PdpuConfig(in_fmt, out_fmt, n_terms, wm, parse_mode(mode_s));
  auto read_pattern = [&](PositFormat fmt) {
    std::string tok;
    if (!(is >> tok)) throw FormatError("truncated test vector line");
    return parse_hex(tok, fmt);
  };
  for (int i = 0; i < n_terms; ++i) tv.va.push_back(read_pattern(in_fmt));
  for (int i = 0; i < n_terms; ++i) tv.vb.push_back(read_pattern(in_fmt));
  tv.acc = read_pattern(out_fmt);
  tv.expected = read_pattern(out_fmt);
  return tv;
}

}  // namespace pdpu
