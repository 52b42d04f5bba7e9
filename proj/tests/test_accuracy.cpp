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

#include "pdpu/accuracy.hpp"

#include <cmath>
#include <cstring>

#include "doctest.h"

using namespace pdpu;

TEST_CASE("decimal accuracy anchors") {
  CHECK(decimal_accuracy(3.7, 3.7) == kDecimalAccuracyCeiling);
  CHECK(decimal_accuracy(1.0, 10.0) == doctest::Approx(0.0));
  CHECK(std::isinf(decimal_accuracy(1.0, -1.0)));
  CHECK(decimal_accuracy(1.0, -1.0) < 0);
  CHECK(std::isinf(decimal_accuracy(0.0, 1.0)));
  CHECK(std::isinf(decimal_accuracy(1.0, 0.0)));
  CHECK(decimal_accuracy(0.0, 0.0) == kDecimalAccuracyCeiling);
  // One part in 1e6 off: about 6.36 decimal digits.
  CHECK(decimal_accuracy(1.0, 1.000001) ==
        doctest::Approx(-std::log10(std::log10(1.000001))).epsilon(1e-9));
  // Configurable ceiling.
  CHECK(decimal_accuracy(2.0, 2.0, 10.0) == 10.0);
}

TEST_CASE("decimal accuracy on exact values matches the double path") {
  ExactValue one = ExactValue::from_i64(1);
  ExactValue ten = ExactValue::from_i64(10);
  CHECK(decimal_accuracy(one, ten) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(decimal_accuracy(one, one) == kDecimalAccuracyCeiling);
  CHECK(std::isinf(decimal_accuracy(one, -one)));
  ExactValue close =
      ExactValue::from_parts(1, BigUint::from_u64((1ull << 40) + 1), -40);
  CHECK(decimal_accuracy(one, close) ==
        doctest::Approx(decimal_accuracy(1.0, close.to_double()))
            .epsilon(1e-6));
}

TEST_CASE("corpus regeneration is bit identical") {
  Corpus c;
  c.seed = 12345;
  c.n_vectors = 500;
  c.n_terms = 4;
  CorpusData d1 = materialize(c);
  CorpusData d2 = materialize(c);
  REQUIRE(d1.a.size() == d2.a.size());
  CHECK(std::memcmp(d1.a.data(), d2.a.data(), d1.a.size() * 8) == 0);
  CHECK(std::memcmp(d1.b.data(), d2.b.data(), d1.b.size() * 8) == 0);
  c.seed = 54321;
  CorpusData d3 = materialize(c);
  CHECK(std::memcmp(d1.a.data(), d3.a.data(), d1.a.size() * 8) != 0);
}

TEST_CASE("log uniform corpus stays in range") {
  Corpus c;
  c.a_dist = Distribution::log_uniform(0.01, 100.0);
  c.b_dist = Distribution::log_uniform(1.0, 2.0);
  c.n_vectors = 200;
  c.n_terms = 2;
  CorpusData d = materialize(c);
  for (double x : d.a) {
    CHECK(std::fabs(x) >= 0.01);
    CHECK(std::fabs(x) <= 100.0);
  }
  bool saw_negative = false;
  for (double x : d.b) saw_negative |= x < 0;
  CHECK(saw_negative);
}

namespace {

std::vector<AccuracyReport> small_sweep(std::vector<PdpuConfig> cfgs,
                                        int n_terms) {
  Corpus c;
  c.seed = 777;
  c.n_vectors = 2000;
  c.n_terms = n_terms;
  return run_sweep(c, cfgs);
}

}  // namespace

TEST_CASE("sweep: quire adds zero error and dominates finite windows") {
  PositFormat in(13, 2), out(16, 2);
  auto reports = small_sweep(
      {PdpuConfig(in, out, 4, 14, DotMode::kQuire),
       PdpuConfig(in, out, 4, 14, DotMode::kFused),
       PdpuConfig(in, out, 4, 8, DotMode::kFused)},
      4);
  const auto& quire = reports[0];
  const auto& w14 = reports[1];
  const auto& w8 = reports[2];

  // The quire engine scores exactly what the single-rounding oracle itself
  // scores: the engine adds zero error beyond quantization and rounding.
  Corpus c;
  c.seed = 777;
  c.n_vectors = 2000;
  c.n_terms = 4;
  CorpusData data = materialize(c);
  PdpuConfig qcfg(in, out, 4, 14, DotMode::kQuire);
  const double tol = std::exp2(-out.frac_width());
  int64_t oracle_matches = 0;
  for (int v = 0; v < data.n_vectors; ++v) {
    std::vector<PositBits> va, vb;
    ExactValue exact;
    for (int t = 0; t < 4; ++t) {
      size_t idx = static_cast<size_t>(v) * 4 + t;
      va.push_back(from_double(data.a[idx], in));
      vb.push_back(from_double(data.b[idx], in));
      exact = exact + ExactValue::from_double(data.a[idx]) *
                          ExactValue::from_double(data.b[idx]);
    }
    ExactValue got = to_exact(oracle_fused_dot(qcfg, va, vb, zero_pattern(out)));
    if (detail::rel_error(exact, got) <= tol) ++oracle_matches;
  }
  CHECK(quire.match_rate ==
        static_cast<double>(oracle_matches) / data.n_vectors);

  CHECK(quire.mean_rel_err <= w14.mean_rel_err);
  CHECK(w14.mean_rel_err <= w8.mean_rel_err);
  CHECK(w14.match_rate >= w8.match_rate);
  for (const auto& r : reports) {
    CHECK(r.match_rate >= 0.0);
    CHECK(r.match_rate <= 1.0);
    CHECK(r.max_rel_err >= r.mean_rel_err);
  }
}

TEST_CASE("sweep: fused never loses to discrete mul-add on average") {
  PositFormat f(8, 2);
  auto reports = small_sweep(
      {PdpuConfig(f, f, 4, quire_width(f), DotMode::kFused),
       PdpuConfig(f, f, 4, 14, DotMode::kDiscreteMulAdd)},
      4);
  CHECK(reports[0].mean_rel_err <= reports[1].mean_rel_err);
}

TEST_CASE("sweep: accuracy trends with window width and input precision") {
  PositFormat out(16, 2);
  auto reports = small_sweep(
      {PdpuConfig(PositFormat(13, 2), out, 8, 14, DotMode::kFused),
       PdpuConfig(PositFormat(13, 2), out, 8, 10, DotMode::kFused),
       PdpuConfig(PositFormat(10, 2), out, 8, 14, DotMode::kFused)},
      8);
  CHECK(reports[0].match_rate > reports[1].match_rate);  // Wm 14 beats 10
  CHECK(reports[0].match_rate > reports[2].match_rate);  // P13 beats P10 in
  CHECK(reports[0].mean_decimal_accuracy > reports[1].mean_decimal_accuracy);
}

TEST_CASE("sweep rejects bad inputs and mismatched N") {
  Corpus c;
  c.n_vectors = 10;
  c.n_terms = 4;
  CHECK_THROWS_AS(run_sweep(c, {}), FormatError);
  CHECK_THROWS_AS(
      run_sweep(c, {PdpuConfig(PositFormat(8, 2), PositFormat(8, 2), 2, 14,
                               DotMode::kFused)}),
      LengthMismatch);
}

TEST_CASE("csv output is stable and well formed") {
  PositFormat f(8, 2);
  auto reports = small_sweep({PdpuConfig(f, f, 2, 14, DotMode::kFused)}, 2);
  std::string csv = to_csv(reports);
  CHECK(csv.rfind("config,mode,n,es_in,n_out,N,wm,mean_rel_err,max_rel_err,"
                  "match_rate,mean_dec_acc\n",
                  0) == 0);
  CHECK(csv.find("P(8/8,2),fused,8,2,8,2,14,") != std::string::npos);
  auto reports2 = small_sweep({PdpuConfig(f, f, 2, 14, DotMode::kFused)}, 2);
  CHECK(to_csv(reports2) == csv);  // determinism
}

TEST_CASE("tapered accuracy profile") {
  PositFormat p16(16, 2), p8(8, 2);
  // A sample exactly representable lands at the ceiling.
  std::vector<double> just_one = {1.0};
  AccuracyHistogram h1 = tapered_accuracy_profile(p16, just_one);
  CHECK(h1.mean == kDecimalAccuracyCeiling);
  CHECK(h1.counts.back() == 1);
  CHECK(h1.n_samples == 1);

  // More bits give a better Gaussian profile.
  detail::Sampler sampler(99);
  std::vector<double> xs;
  for (int i = 0; i < 20000; ++i)
    xs.push_back(sampler.sample(Distribution::gaussian(0.0, 1.0)));
  AccuracyHistogram wide = tapered_accuracy_profile(p16, xs);
  AccuracyHistogram narrow = tapered_accuracy_profile(p8, xs);
  CHECK(wide.mean > narrow.mean);

  // Accuracy tapers toward the dynamic-range edge.
  double at_maxpos2 = representation_accuracy(p16, 0x1p57);  // maxpos * 2
  double at_mid = representation_accuracy(p16, 1.5);
  CHECK(at_maxpos2 < at_mid);

  std::string csv = to_csv(wide);
  CHECK(csv.rfind("bin_lo,bin_hi,count\n", 0) == 0);
  size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == wide.counts.size() + 1);
}
