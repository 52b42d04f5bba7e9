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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pdpu/engine.hpp"
#include "pdpu/exact.hpp"
#include "pdpu/oracle.hpp"

namespace pdpu {

/// Operand distribution for synthetic corpora. Gaussian is signed;
/// LogUniform draws a magnitude log-uniformly from [lo, hi] and a random
/// sign.
struct Distribution {
  enum class Kind { kGaussian, kLogUniform };
  Kind kind = Kind::kGaussian;
  double p1 = 0.0;  // mu, or lo
  double p2 = 1.0;  // sigma, or hi

  static Distribution gaussian(double mu, double sigma) {
    return {Kind::kGaussian, mu, sigma};
  }
  static Distribution log_uniform(double lo, double hi) {
    return {Kind::kLogUniform, lo, hi};
  }
};

/// Synthetic operand corpus: n_vectors dot products of n_terms (a_i, b_i)
/// pairs. Regeneration from the same parameters is bit-identical; the
/// generator is hand-rolled (Box-Muller over mt19937_64) so no standard
/// library distribution quirks leak into the data.
struct Corpus {
  uint64_t seed = 1;
  Distribution a_dist = Distribution::gaussian(0.0, 1.0);
  Distribution b_dist = Distribution::gaussian(0.0, 0.1);
  int n_vectors = 100000;
  int n_terms = 8;
};

namespace detail {

class Sampler {
 public:
  explicit Sampler(uint64_t seed) : rng_(seed) {}

  double uniform01() {
    return static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
  }

  double sample(const Distribution& d) {
    switch (d.kind) {
      case Distribution::Kind::kGaussian:
        return d.p1 + d.p2 * standard_normal();
      case Distribution::Kind::kLogUniform: {
        double lo = std::log(d.p1), hi = std::log(d.p2);
        double mag = std::exp(lo + uniform01() * (hi - lo));
        return uniform01() < 0.5 ? -mag : mag;
      }
    }
    return 0.0;
  }

 private:
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
  }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

/// Row-major (vector index * n_terms + term) operand values.
struct CorpusData {
  std::vector<double> a;
  std::vector<double> b;
  int n_vectors = 0;
  int n_terms = 0;
};

inline CorpusData materialize(const Corpus& c) {
  detail::Sampler sampler(c.seed);
  CorpusData d;
  d.n_vectors = c.n_vectors;
  d.n_terms = c.n_terms;
  size_t total = static_cast<size_t>(c.n_vectors) * c.n_terms;
  d.a.reserve(total);
  d.b.reserve(total);
  for (size_t i = 0; i < total; ++i) {
    d.a.push_back(sampler.sample(c.a_dist));
    d.b.push_back(sampler.sample(c.b_dist));
  }
  return d;
}

inline constexpr double kDecimalAccuracyCeiling = 17.0;

/// Decimal accuracy -log10|log10(xhat/x)|: the count of matching decimal
/// digits between a value and its representation. Exact matches cap at
/// `ceiling`; a sign mismatch or zero-vs-nonzero is -inf.
inline double decimal_accuracy(double x, double xhat,
                               double ceiling = kDecimalAccuracyCeiling) {
  if (x == xhat) return ceiling;
  if (x == 0.0 || xhat == 0.0 || std::signbit(x) != std::signbit(xhat))
    return -std::numeric_limits<double>::infinity();
  double d = std::fabs(std::log10(xhat / x));
  if (d == 0.0) return ceiling;
  return std::min(-std::log10(d), ceiling);
}

/// Same metric on exact values; immune to double overflow and exact about
/// equality. Used by the sweep aggregation.
inline double decimal_accuracy(const ExactValue& x, const ExactValue& xhat,
                               double ceiling = kDecimalAccuracyCeiling) {
  if (x == xhat) return ceiling;
  if (x.is_nar() || xhat.is_nar() || x.is_zero() || xhat.is_zero() ||
      x.sign() != xhat.sign())
    return -std::numeric_limits<double>::infinity();
  double ratio_log2 = xhat.log2_abs() - x.log2_abs();
  double d;
  if (std::fabs(ratio_log2) > 1e-6) {
    d = std::fabs(ratio_log2) * 0.30102999566398120;  // log10(2)
  } else {
    // Ratio too near 1 for the log difference; use the exact residual:
    // |log10(1+delta)| ~= |delta| / ln(10).
    ExactValue diff = xhat - x;
    if (diff.is_zero()) return ceiling;
    double delta_log2 = diff.log2_abs() - x.log2_abs();
    d = std::exp2(delta_log2) / 2.30258509299404568;
  }
  if (d == 0.0) return ceiling;
  return std::min(-std::log10(d), ceiling);
}

/// Aggregated accuracy of one engine configuration over a corpus.
/// match_rate counts results within relative tolerance 2^-frac_width(out)
/// of the exact dot product; mean_decimal_accuracy averages the per-case
/// metric clamped into [0, ceiling] (the sentinel counts as zero digits).
struct AccuracyReport {
  PdpuConfig config;
  double mean_rel_err = 0.0;
  double max_rel_err = 0.0;
  double match_rate = 0.0;
  double mean_decimal_accuracy = 0.0;
};

namespace detail {

inline double rel_error(const ExactValue& exact, const ExactValue& got) {
  if (exact == got) return 0.0;
  if (exact.is_nar() || got.is_nar())
    return std::numeric_limits<double>::infinity();
  ExactValue diff = got - exact;
  if (diff.is_zero()) return 0.0;
  // |diff| / |exact|, or |diff| / |got| when the reference is zero.
  const ExactValue& den = exact.is_zero() ? got : exact;
  return std::exp2(diff.log2_abs() - den.log2_abs());
}

}  // namespace detail

/// Evaluates every corpus vector under each configuration against the
/// exact dot product of the original real operands, so input quantization
/// error counts toward the reported accuracy, as it does when hardware is
/// scored against reference data. Deterministic given the corpus
/// parameters; aggregation order is the vector order.
inline std::vector<AccuracyReport> run_sweep(
    const Corpus& corpus, const std::vector<PdpuConfig>& configs) {
  if (corpus.n_vectors < 1 || configs.empty())
    throw FormatError("sweep needs a nonempty corpus and config list");
  CorpusData data = materialize(corpus);
  std::vector<ExactValue> exact_dots(static_cast<size_t>(data.n_vectors));
  for (int v = 0; v < data.n_vectors; ++v) {
    ExactValue sum;
    for (int t = 0; t < data.n_terms; ++t) {
      size_t idx = static_cast<size_t>(v) * data.n_terms + t;
      sum = sum + ExactValue::from_double(data.a[idx]) *
                      ExactValue::from_double(data.b[idx]);
    }
    exact_dots[static_cast<size_t>(v)] = sum;
  }
  std::vector<AccuracyReport> reports;
  reports.reserve(configs.size());
  for (const PdpuConfig& cfg : configs) {
    if (cfg.n_terms != corpus.n_terms)
      throw LengthMismatch("config N does not match corpus n_terms");
    const double tol = std::exp2(-cfg.out_fmt.frac_width());
    AccuracyReport rep;
    rep.config = cfg;
    double sum_rel = 0.0, sum_da = 0.0;
    int64_t matches = 0;
    std::vector<PositBits> va(static_cast<size_t>(cfg.n_terms),
                              zero_pattern(cfg.in_fmt));
    std::vector<PositBits> vb = va;
    const PositBits acc = zero_pattern(cfg.out_fmt);
    for (int v = 0; v < data.n_vectors; ++v) {
      for (int t = 0; t < data.n_terms; ++t) {
        size_t idx = static_cast<size_t>(v) * data.n_terms + t;
        va[static_cast<size_t>(t)] = from_double(data.a[idx], cfg.in_fmt);
        vb[static_cast<size_t>(t)] = from_double(data.b[idx], cfg.in_fmt);
      }
      const ExactValue& exact = exact_dots[static_cast<size_t>(v)];
      ExactValue got = to_exact(run_dot(cfg, va, vb, acc));
      double rel = detail::rel_error(exact, got);
      sum_rel += rel;
      rep.max_rel_err = std::max(rep.max_rel_err, rel);
      if (rel <= tol) ++matches;
      double da = decimal_accuracy(exact, got);
      sum_da += std::clamp(da, 0.0, kDecimalAccuracyCeiling);
    }
    rep.mean_rel_err = sum_rel / data.n_vectors;
    rep.match_rate = static_cast<double>(matches) / data.n_vectors;
    rep.mean_decimal_accuracy = sum_da / data.n_vectors;
    reports.push_back(rep);
  }
  return reports;
}

inline std::string report_csv_header() {
  return "config,mode,n,es_in,n_out,N,wm,mean_rel_err,max_rel_err,"
         "match_rate,mean_dec_acc";
}

inline std::string to_csv_line(const AccuracyReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%d,%d,%d,%.9e,%.9e,%.6f,%.6f",
                r.config.name().c_str(), mode_name(r.config.mode).c_str(),
                r.config.in_fmt.n, r.config.in_fmt.es, r.config.out_fmt.n,
                r.config.n_terms, r.config.wm, r.mean_rel_err, r.max_rel_err,
                r.match_rate, r.mean_decimal_accuracy);
  return buf;
}

inline std::string to_csv(const std::vector<AccuracyReport>& reports) {
  std::string out = report_csv_header() + "\n";
  for (const auto& r : reports) out += to_csv_line(r) + "\n";
  return out;
}

/// Decimal accuracy of representing x in fmt (round, decode, compare).
inline double representation_accuracy(PositFormat fmt, double x) {
  return decimal_accuracy(x, to_double(from_double(x, fmt)));
}

struct AccuracyHistogram {
  double lo = 0.0;
  double hi = kDecimalAccuracyCeiling;
  std::vector<int64_t> counts;
  double mean = 0.0;
  int64_t n_samples = 0;
};

/// Per-sample representation accuracy of a format over a sample set,
/// binned over [0, ceiling]. Shows the tapered profile: peak accuracy near
/// |x| = 1, falling off toward the dynamic-range edges.
inline AccuracyHistogram tapered_accuracy_profile(PositFormat fmt,
                                                  std::span<const double>
                                                      samples,
                                                  int n_bins = 34) {
  AccuracyHistogram h;
  h.counts.assign(static_cast<size_t>(n_bins), 0);
  double sum = 0.0;
  for (double x : samples) {
    double da =
        std::clamp(representation_accuracy(fmt, x), h.lo, h.hi);
    sum += da;
    int bin = static_cast<int>((da - h.lo) / (h.hi - h.lo) * n_bins);
    if (bin >= n_bins) bin = n_bins - 1;
    if (bin < 0) bin = 0;
    ++h.counts[static_cast<size_t>(bin)];
    ++h.n_samples;
  }
  h.mean = h.n_samples ? sum / static_cast<double>(h.n_samples) : 0.0;
  return h;
}

inline std::string to_csv(const AccuracyHistogram& h) {
  std::string out = "bin_lo,bin_hi,count\n";
  size_t n = h.counts.size();
  for (size_t i = 0; i < n; ++i) {
    double w = (h.hi - h.lo) / static_cast<double>(n);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,%lld\n",
                  h.lo + w * static_cast<double>(i),
                  h.lo + w * static_cast<double>(i + 1),
                  static_cast<long long>(h.counts[i]));
    out += buf;
  }
  return out;
}

}  // namespace pdpu
