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

// Batch front end for the posit dot-product model: codec inspection,
// staged dot products with tracing, differential fuzzing against the
// exact oracle, and accuracy sweeps.
//
// Exit codes: 0 success, 1 usage/input error, 2 divergence found.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdpu/pdpu.hpp"

namespace {

using namespace pdpu;

std::vector<PositBits> parse_pattern_list(const std::string& csv,
                                          PositFormat fmt) {
  std::vector<PositBits> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_hex(tok, fmt));
  if (out.empty()) throw FormatError("empty pattern list");
  return out;
}

uint64_t effective_seed(uint64_t flag_seed) {
  if (const char* env = std::getenv("PDPU_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::logic_error&) {
      throw FormatError("PDPU_SEED must be an unsigned integer");
    }
  }
  return flag_seed;
}

int cmd_decode(const std::string& fmt_s, const std::string& bits_s) {
  PositFormat fmt = parse_format(fmt_s);
  PositBits p = parse_hex(bits_s, fmt);
  std::printf("format=%s bits=0x%s\n", format_name(fmt).c_str(),
              to_hex(p).c_str());
  PositFields f = inspect(p);
  if (f.is_zero) {
    std::printf("zero\n");
    return 0;
  }
  if (f.is_nar) {
    std::printf("NaR\n");
    return 0;
  }
  DecodedPosit d = decode(p);
  ExactValue v = to_exact(p);
  std::printf("sign=%+d\n", d.sign);
  std::printf("regime_run=%d\n", f.regime_run);
  std::printf("k=%d\n", f.k);
  std::printf("exponent=%d\n", f.exponent);
  std::printf("mantissa=0x%llx frac_bits=%d scale=%d\n",
              static_cast<unsigned long long>(f.frac_field), f.frac_bits,
              d.scale);
  std::printf("value=%s\n", v.to_decimal_string().c_str());
  std::printf("value_approx=%.17g\n", v.to_double());
  return 0;
}

int cmd_convert(const std::string& fmt_s, const std::string& real_s,
                const std::string& bits_s) {
  PositFormat fmt = parse_format(fmt_s);
  if (!real_s.empty() && !bits_s.empty())
    throw FormatError("pass either --from-real or --bits, not both");
  if (!real_s.empty()) {
    std::printf("%s\n", to_hex(parse_real(real_s, fmt)).c_str());
    return 0;
  }
  if (!bits_s.empty()) {
    PositBits p = parse_hex(bits_s, fmt);
    std::printf("%s\n", to_exact(p).to_decimal_string().c_str());
    return 0;
  }
  throw FormatError("convert needs --from-real or --bits");
}

void print_trace(const PdpuTrace& t) {
  for (size_t i = 0; i < t.s1.sign_ab.size(); ++i)
    std::printf("s1.s_ab[%zu]=%+d\n", i, t.s1.sign_ab[i]);
  for (size_t i = 0; i < t.s1.exp_ab.size(); ++i)
    std::printf("s1.e_ab[%zu]=%d\n", i, t.s1.exp_ab[i]);
  if (t.nar_short_circuit) {
    std::printf("s1.nar=1\n");
    std::printf("s6.out=0x%s\n", to_hex(t.out).c_str());
    return;
  }
  for (size_t i = 0; i < t.s2.products.size(); ++i)
    std::printf("s2.mant[%zu]=0x%llx\n", i,
                static_cast<unsigned long long>(t.s2.products[i].mantissa));
  std::printf("s2.e_max=%d\n", t.s2.e_max);
  for (size_t i = 0; i < t.aligned.size(); ++i)
    std::printf("s3.aligned[%zu]=0x%s\n", i, t.aligned[i].to_hex().c_str());
  std::printf("s4.sum=0x%s\n", t.csa.sum.to_hex().c_str());
  std::printf("s4.carry=0x%s\n", t.csa.carry.to_hex().c_str());
  std::printf("s4.f_s=%+d\n", t.s4.sign);
  std::printf("s4.s_m=0x%s\n", t.s4.magnitude.to_hex().c_str());
  if (t.s5.is_zero) {
    std::printf("s5.zero=1\n");
  } else {
    std::printf("s5.f_e=%d\n", t.s5.scale);
    std::printf("s5.f_m=0x%llx\n",
                static_cast<unsigned long long>(t.s5.mantissa));
    std::printf("s5.sticky=%d\n", t.s5.sticky ? 1 : 0);
  }
  std::printf("s6.out=0x%s\n", to_hex(t.out).c_str());
}

int cmd_dot(const std::string& in_s, const std::string& out_s, int wm,
            const std::string& mode_s, const std::string& a_s,
            const std::string& b_s, const std::string& acc_s, bool trace) {
  PositFormat in_fmt = parse_format(in_s);
  PositFormat out_fmt = out_s.empty() ? in_fmt : parse_format(out_s);
  auto va = parse_pattern_list(a_s, in_fmt);
  auto vb = parse_pattern_list(b_s, in_fmt);
  PositBits acc =
      acc_s.empty() ? zero_pattern(out_fmt) : parse_hex(acc_s, out_fmt);
  int n = static_cast<int>(va.size());
  if (mode_s == "oracle") {
    PdpuConfig cfg(in_fmt, out_fmt, n, wm, DotMode::kFused);
    std::printf("out=0x%s\n",
                to_hex(oracle_fused_dot(cfg, va, vb, acc)).c_str());
    return 0;
  }
  PdpuConfig cfg(in_fmt, out_fmt, n, wm, parse_mode(mode_s));
  PositBits out;
  if (trace && (cfg.mode == DotMode::kFused || cfg.mode == DotMode::kQuire)) {
    PdpuTrace t;
    out = pdpu_dot(cfg, va, vb, acc, &t);
    print_trace(t);
  } else {
    out = run_dot(cfg, va, vb, acc);
  }
  std::printf("out=0x%s\n", to_hex(out).c_str());
  return 0;
}

int cmd_fuzz(const std::string& in_s, const std::string& out_s, int n, int wm,
             const std::string& mode_s, int64_t count, uint64_t seed,
             const std::string& vectors_out, bool allow_lossy) {
  PositFormat in_fmt = parse_format(in_s);
  PositFormat out_fmt = out_s.empty() ? in_fmt : parse_format(out_s);
  PdpuConfig cfg(in_fmt, out_fmt, n, wm, parse_mode(mode_s));
  seed = effective_seed(seed);
  std::mt19937_64 rng(seed);
  std::ofstream vec_file;
  if (!vectors_out.empty()) {
    vec_file.open(vectors_out);
    if (!vec_file) throw FormatError("cannot open " + vectors_out);
  }
  int64_t divergences = 0;
  std::vector<PositBits> va(static_cast<size_t>(n), zero_pattern(in_fmt));
  std::vector<PositBits> vb = va;
  for (int64_t i = 0; i < count; ++i) {
    for (int t = 0; t < n; ++t) {
      va[static_cast<size_t>(t)] =
          PositBits(in_fmt, static_cast<uint32_t>(rng()) & in_fmt.bit_mask());
      vb[static_cast<size_t>(t)] =
          PositBits(in_fmt, static_cast<uint32_t>(rng()) & in_fmt.bit_mask());
    }
    PositBits acc(out_fmt, static_cast<uint32_t>(rng()) & out_fmt.bit_mask());
    PositBits got = run_dot(cfg, va, vb, acc);
    PositBits want = oracle_for_mode(cfg, va, vb, acc);
    if (got != want) {
      ++divergences;
      if (vec_file) {
        TestVector tv{cfg, va, vb, acc, want};
        vec_file << to_line(tv) << "\n";
      }
    }
  }
  std::printf("cases=%lld divergences=%lld seed=%llu mode=%s\n",
              static_cast<long long>(count),
              static_cast<long long>(divergences),
              static_cast<unsigned long long>(seed), mode_name(cfg.mode).c_str());
  if (divergences == 0) return 0;
  return allow_lossy ? 0 : 2;
}

int cmd_sweep(const std::string& configs_path, const std::string& out_path,
              uint64_t seed, int n_vectors, const std::string& dist_s,
              double p1a, double p2a, double p1b, double p2b,
              const std::string& profile_fmt_s,
              const std::string& profile_out, int profile_count) {
  std::ifstream cfg_file(configs_path);
  if (!cfg_file) throw FormatError("cannot open " + configs_path);
  std::vector<PdpuConfig> configs;
  std::string line;
  while (std::getline(cfg_file, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string in_s, out_s, mode_s;
    int n, wm;
    if (!(is >> in_s >> out_s >> n >> wm >> mode_s))
      throw FormatError("bad config line: " + line);
    configs.emplace_back(parse_format(in_s), parse_format(out_s), n, wm,
                         parse_mode(mode_s));
  }
  if (configs.empty()) throw FormatError("no configs in " + configs_path);
  seed = effective_seed(seed);

  Corpus corpus;
  corpus.seed = seed;
  corpus.n_vectors = n_vectors;
  if (dist_s == "gaussian") {
    corpus.a_dist = Distribution::gaussian(p1a, p2a);
    corpus.b_dist = Distribution::gaussian(p1b, p2b);
  } else if (dist_s == "loguniform") {
    corpus.a_dist = Distribution::log_uniform(p1a, p2a);
    corpus.b_dist = Distribution::log_uniform(p1b, p2b);
  } else {
    throw FormatError("unknown distribution: " + dist_s);
  }

  std::string csv = report_csv_header() + "\n";
  for (const PdpuConfig& cfg : configs) {
    corpus.n_terms = cfg.n_terms;
    auto reports = run_sweep(corpus, {cfg});
    csv += to_csv_line(reports[0]) + "\n";
  }
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + out_path);
    out << csv;
  }

  if (!profile_fmt_s.empty()) {
    PositFormat pf = parse_format(profile_fmt_s);
    detail::Sampler sampler(seed);
    std::vector<double> samples;
    samples.reserve(static_cast<size_t>(profile_count));
    for (int i = 0; i < profile_count; ++i)
      samples.push_back(sampler.sample(Distribution::gaussian(0.0, 1.0)));
    AccuracyHistogram h = tapered_accuracy_profile(pf, samples);
    if (profile_out.empty()) {
      std::fputs(to_csv(h).c_str(), stdout);
    } else {
      std::ofstream out(profile_out, std::ios::binary);
      if (!out) throw FormatError("cannot open " + profile_out);
      out << to_csv(h);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bit-accurate posit dot-product unit model"};
  app.require_subcommand(1);

  auto* dec = app.add_subcommand("decode", "decode a posit bit pattern");
  std::string dec_fmt, dec_bits;
  dec->add_option("--fmt", dec_fmt, "posit format n,es")->required();
  dec->add_option("--bits", dec_bits, "hex pattern")->required();

  auto* conv = app.add_subcommand("convert", "convert between reals and bits");
  std::string conv_fmt, conv_real, conv_bits;
  conv->add_option("--fmt", conv_fmt, "posit format n,es")->required();
  conv->add_option("--from-real", conv_real, "decimal real to encode");
  conv->add_option("--bits", conv_bits, "hex pattern to print as a real");

  auto* dot = app.add_subcommand("dot", "one dot product, optionally traced");
  std::string dot_in, dot_out, dot_mode = "fused", dot_a, dot_b, dot_acc;
  int dot_wm = 14;
  bool dot_trace = false;
  dot->add_option("--in-fmt", dot_in, "input format n,es")->required();
  dot->add_option("--out-fmt", dot_out, "output format n,es (default input)");
  dot->add_option("--wm", dot_wm, "alignment width");
  dot->add_option("--mode", dot_mode, "fused|quire|muladd|fma|oracle");
  dot->add_option("--a", dot_a, "comma-separated hex patterns")->required();
  dot->add_option("--b", dot_b, "comma-separated hex patterns")->required();
  dot->add_option("--acc", dot_acc, "accumulator hex pattern (default 0)");
  dot->add_flag("--trace", dot_trace, "print per-stage intermediates");

  auto* fuzz = app.add_subcommand("fuzz", "differential fuzz vs the oracle");
  std::string fz_in, fz_out, fz_mode = "quire", fz_vec;
  int fz_n = 4, fz_wm = 14;
  int64_t fz_count = 10000;
  uint64_t fz_seed = 1;
  bool fz_lossy = false;
  fuzz->add_option("--in-fmt", fz_in, "input format n,es")->required();
  fuzz->add_option("--out-fmt", fz_out, "output format n,es (default input)");
  fuzz->add_option("--n", fz_n, "dot-product size N");
  fuzz->add_option("--wm", fz_wm, "alignment width");
  fuzz->add_option("--mode", fz_mode, "fused|quire|muladd|fma");
  fuzz->add_option("--count", fz_count, "number of cases");
  fuzz->add_option("--seed", fz_seed, "rng seed (PDPU_SEED overrides)");
  fuzz->add_option("--vectors-out", fz_vec, "write divergent cases here");
  fuzz->add_flag("--allow-lossy", fz_lossy,
                 "exit 0 even when divergences are expected");

  auto* sweep = app.add_subcommand("sweep", "accuracy sweep to CSV");
  std::string sw_cfgs, sw_out, sw_dist = "gaussian";
  std::string sw_pfmt, sw_pout;
  uint64_t sw_seed = 1;
  int sw_count = 100000, sw_pcount = 100000;
  double sw_p1a = 0.0, sw_p2a = 1.0, sw_p1b = 0.0, sw_p2b = 0.1;
  sweep->add_option("--configs", sw_cfgs, "config file: in out N wm mode")
      ->required();
  sweep->add_option("--out", sw_out, "output CSV (default stdout)");
  sweep->add_option("--seed", sw_seed, "corpus seed (PDPU_SEED overrides)");
  sweep->add_option("--count", sw_count, "corpus vectors");
  sweep->add_option("--dist", sw_dist, "gaussian|loguniform");
  sweep->add_option("--p1a", sw_p1a, "a: mu or lo");
  sweep->add_option("--p2a", sw_p2a, "a: sigma or hi");
  sweep->add_option("--p1b", sw_p1b, "b: mu or lo");
  sweep->add_option("--p2b", sw_p2b, "b: sigma or hi");
  sweep->add_option("--profile-fmt", sw_pfmt,
                    "also emit a tapered accuracy histogram for this format");
  sweep->add_option("--profile-out", sw_pout, "histogram CSV path");
  sweep->add_option("--profile-count", sw_pcount, "histogram sample count");

  try {
    app.parse(argc, argv);
    if (*dec) return cmd_decode(dec_fmt, dec_bits);
    if (*conv) return cmd_convert(conv_fmt, conv_real, conv_bits);
    if (*dot)
      return cmd_dot(dot_in, dot_out, dot_wm, dot_mode, dot_a, dot_b, dot_acc,
                     dot_trace);
    if (*fuzz)
      return cmd_fuzz(fz_in, fz_out, fz_n, fz_wm, fz_mode, fz_count, fz_seed,
                      fz_vec, fz_lossy);
    if (*sweep)
      return cmd_sweep(sw_cfgs, sw_out, sw_seed, sw_count, sw_dist, sw_p1a,
                       sw_p2a, sw_p1b, sw_p2b, sw_pfmt, sw_pout, sw_pcount);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
