// Copyright 2026 The CHEM Authors.
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

// chem-bench: cached-encryption benchmark and verification harness.
//
// Exit codes: 0 success, 1 invariant failure, 2 configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chem/bench.hpp"
#include "chem/errors.hpp"
#include "chem/radix_cache.hpp"
#include "chem/serialization.hpp"
#include "chem/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

constexpr const char* kSeedEnv = "CHEM_SEED";

struct CommonArgs {
  unsigned radix = 2;
  unsigned bits = 16;
  std::size_t zeros = 128;
  std::size_t key_bits = 2048;
  std::string scheme = "paillier";
  std::uint64_t seed = 1;
  unsigned reps = 3;
  unsigned workers = 1;
  std::string out;
  std::string csv;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--radix", a.radix, "Radix r")->capture_default_str();
  cmd->add_option("--bits", a.bits, "Plaintext bit width B")->capture_default_str();
  cmd->add_option("--zeros", a.zeros, "Zero-pool size n_z")->capture_default_str();
  cmd->add_option("--key-bits", a.key_bits,
                  "Paillier modulus bits (debug: plaintext modulus bits)")
      ->capture_default_str();
  cmd->add_option("--scheme", a.scheme, "paillier or debug")
      ->check(CLI::IsMember({"paillier", "debug"}))
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "Seed (overridden by $CHEM_SEED)")
      ->capture_default_str();
  cmd->add_option("--reps", a.reps, "Timed repetitions")->capture_default_str();
  cmd->add_option("--workers", a.workers, "Threads for cached tensor encryption")
      ->capture_default_str();
  cmd->add_option("--out", a.out, "JSON report path (stdout when omitted)");
  cmd->add_option("--csv", a.csv, "CSV report path");
}

void apply_seed_override(CommonArgs& a) {
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      a.seed = std::stoull(env, &used, 10);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw chem::ConfigError(std::string(kSeedEnv) + " must be an unsigned integer");
    }
  }
}

chem::SchemeConfig scheme_config(const CommonArgs& a) {
  return {chem::parse_scheme_kind(a.scheme), a.key_bits};
}

chem::CacheParams cache_params(const CommonArgs& a) {
  chem::CacheParams p;
  p.radix = a.radix;
  p.bit_width = a.bits;
  p.zero_count = a.zeros;
  return p;
}

void emit_json(const std::string& path, const chem::json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    chem::write_json_file(path, j);
  }
}

void emit_csv(const std::string& path, const std::vector<const chem::BenchReport*>& rows) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw chem::ConfigError("cannot write '" + path + "'");
  out << chem::BenchReport::csv_header() << '\n';
  for (const auto* r : rows) out << r->csv_row() << '\n';
}

std::vector<std::size_t> parse_shape(const std::string& s) {
  std::vector<std::size_t> shape;
  std::string tok;
  for (char ch : s + ",") {
    if (ch == ',' || ch == 'x') {
      if (tok.empty()) throw chem::ConfigError("malformed shape '" + s + "'");
      shape.push_back(std::stoull(tok));
      tok.clear();
    } else {
      tok.push_back(ch);
    }
  }
  return shape;
}

int run_build_cache(CommonArgs& a, const std::string& cache_out,
                    const std::string& key_out) {
  chem::RandomSource rng(a.seed);
  const auto bundle = chem::make_scheme(chem::parse_scheme_kind(a.scheme), a.key_bits, rng);
  const auto cache = chem::build_cache(bundle.scheme, cache_params(a), rng);
  chem::write_json_file(cache_out, chem::cache_to_json(cache));
  if (!key_out.empty()) chem::write_json_file(key_out, chem::bundle_to_json(bundle));
  std::cerr << "cache " << cache.fingerprint() << ": "
            << cache.radix_ctxts().size() << " radix entries, "
            << cache.zero_ctxts().size() << " zeros -> " << cache_out << '\n';
  return kExitOk;
}

int run_bench_encrypt(CommonArgs& a, const std::string& workload,
                      const std::string& shape, std::optional<double> rate,
                      std::size_t samples) {
  chem::WorkloadSpec spec = chem::workload_preset(workload);
  if (!shape.empty()) spec.shape = parse_shape(shape);
  if (rate) spec.nonempty_rate = *rate;
  spec.sample_count = samples;
  spec.seed = a.seed;
  spec.bit_width = a.bits;
  const auto report = chem::bench_encrypt(spec, cache_params(a), scheme_config(a),
                                          a.reps, {a.workers, 8});
  emit_json(a.out, report.to_json());
  emit_csv(a.csv, {&report});
  std::cerr << spec.name << ": reduction " << report.reduction_percent << "% ("
            << report.direct_encrypt.mean() << " s direct, "
            << report.cached_encrypt.mean() << " s cached)\n";
  const bool counters_ok = report.digit_additions == report.expected_digit_additions;
  return report.verified && counters_ok ? kExitOk : kExitInvariant;
}

int run_bench_cache_build(CommonArgs& a, const std::vector<unsigned>& widths) {
  const auto report = chem::bench_cache_build(a.radix, widths, a.zeros,
                                              scheme_config(a), a.reps, a.seed);
  emit_json(a.out, report.to_json());
  std::vector<const chem::BenchReport*> rows;
  for (const auto& e : report.entries) rows.push_back(&e);
  emit_csv(a.csv, rows);
  for (const auto& e : report.entries) {
    std::cerr << e.workload << ": " << e.cache_build.mean() << " s\n";
  }
  return report.nondecreasing && report.at_most_linear ? kExitOk : kExitInvariant;
}

int run_fl_round(CommonArgs& a, chem::FlRoundSpec spec) {
  spec.seed = a.seed;
  const auto result = chem::fl_round(spec, cache_params(a), scheme_config(a), {a.workers, 8});
  emit_json(a.out, result.report.to_json());
  emit_csv(a.csv, {&result.report});
  std::cerr << "fl-round k=" << result.participants << ": "
            << (result.exact ? "aggregate exact" : "AGGREGATE MISMATCH")
            << ", reduction " << result.report.reduction_percent << "%\n";
  return result.exact ? kExitOk : kExitInvariant;
}

int run_verify(CommonArgs& a, const std::string& suite) {
  const auto report = chem::verify(suite, a.seed);
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "[PASS] " : "[FAIL] ") << c.suite << ": " << c.name;
    if (!c.detail.empty()) std::cerr << " (" << c.detail << ")";
    std::cerr << '\n';
  }
  if (!a.out.empty()) chem::write_json_file(a.out, report.to_json());
  return report.passed() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cached homomorphic encryption benchmark harness"};
  app.require_subcommand(1);

  CommonArgs build_args, enc_args, cb_args, fl_args, verify_args;

  auto* build = app.add_subcommand("build-cache", "Build a radix cache and save it as JSON");
  add_common(build, build_args);
  std::string cache_out = "cache.json";
  std::string key_out;
  build->add_option("--cache-out", cache_out, "Cache container path")->capture_default_str();
  build->add_option("--key-out", key_out, "Key pair path (contains the secret key)");

  auto* enc = app.add_subcommand("bench-encrypt", "Time direct vs cached tensor encryption");
  enc_args.bits = 8;
  enc_args.zeros = 64;
  add_common(enc, enc_args);
  std::string workload = "mnist";
  std::string shape;
  std::optional<double> rate;
  std::size_t samples = 1;
  enc->add_option("--workload", workload, "mnist, cars or arctic")->capture_default_str();
  enc->add_option("--shape", shape, "Override shape, e.g. 28x28");
  enc->add_option("--rate", rate, "Override nonempty rate")->check(CLI::Range(0.0, 1.0));
  enc->add_option("--samples", samples, "Tensors per repetition")->capture_default_str();

  auto* cb = app.add_subcommand("bench-cache-build", "Time cache construction across bit widths");
  add_common(cb, cb_args);
  std::vector<unsigned> widths{16, 32, 64, 128};
  cb->add_option("--bits-list", widths, "Bit widths to build")->delimiter(',');

  auto* fl = app.add_subcommand("fl-round", "Run one encrypted federated aggregation round");
  fl_args.zeros = 64;
  add_common(fl, fl_args);
  chem::FlRoundSpec fl_spec;
  fl->add_option("--clients", fl_spec.client_count, "Total clients")->capture_default_str();
  fl->add_option("--fraction", fl_spec.fraction, "Participating fraction")->capture_default_str();
  fl->add_option("--model-size", fl_spec.model_size, "Weights per client")->capture_default_str();
  fl->add_option("--distribution", fl_spec.distribution, "iid or non-iid (metadata)")
      ->check(CLI::IsMember({"iid", "non-iid"}))
      ->capture_default_str();

  auto* ver = app.add_subcommand("verify", "Run the invariant suites");
  add_common(ver, verify_args);
  std::string suite = "all";
  ver->add_option("--suite", suite, "roundtrip, oracle, parametrization, randomness or all")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*build) {
      apply_seed_override(build_args);
      return run_build_cache(build_args, cache_out, key_out);
    }
    if (*enc) {
      apply_seed_override(enc_args);
      return run_bench_encrypt(enc_args, workload, shape, rate, samples);
    }
    if (*cb) {
      apply_seed_override(cb_args);
      return run_bench_cache_build(cb_args, widths);
    }
    if (*fl) {
      apply_seed_override(fl_args);
      return run_fl_round(fl_args, fl_spec);
    }
    if (*ver) {
      apply_seed_override(verify_args);
      return run_verify(verify_args, suite);
    }
  } catch (const chem::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const chem::ValidationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const chem::CapacityError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitConfig;
}
