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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chem/radix_cache.hpp"
#include "chem/scheme.hpp"
#include "chem/tensor.hpp"

namespace chem {

/// Synthetic workload matched to a dataset's shape and sparsity. Nonzero
/// elements are uniform over [1, 2^B).
struct WorkloadSpec {
  std::string name = "custom";
  std::vector<std::size_t> shape{28, 28};
  double nonempty_rate = 0.179;
  unsigned bit_width = 8;
  std::size_t sample_count = 1;
  std::uint64_t seed = 1;

  static WorkloadSpec mnist();          // 28x28, 17.90 %
  static WorkloadSpec stanford_cars();  // 360x640, 98.73 %
  static WorkloadSpec cmu_arctic();     // 64x321, 99.72 %
};

// "mnist", "cars" or "arctic"; throws ConfigError otherwise.
WorkloadSpec workload_preset(std::string_view name);

TensorPlain synth_tensor(const WorkloadSpec& spec, RandomSource& rng);

double nonempty_rate(const TensorPlain& t);

struct SchemeConfig {
  SchemeKind kind = SchemeKind::paillier;
  std::size_t key_bits = 2048;
};

struct BenchOptions {
  unsigned workers = 1;
  std::size_t warmup_elements = 8;
};

struct TimingStats {
  std::vector<double> raw_seconds;

  double mean() const;
  double stddev() const;  // sample standard deviation; 0 for < 2 samples
};

struct BenchReport {
  std::string workload;
  std::string scheme;
  std::size_t key_bits = 0;
  CacheParams cache;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  unsigned repetitions = 0;
  std::size_t elements = 0;
  double measured_nonempty_rate = 0;

  TimingStats cache_build;
  TimingStats direct_encrypt;
  TimingStats cached_encrypt;
  // 100 * (1 - mean(cached) / mean(direct)); 0 when nothing was timed.
  double reduction_percent = 0;

  // Counters for one pass of the cached path over the workload.
  std::uint64_t digit_additions = 0;
  std::uint64_t randomizer_additions = 0;
  // Sum over elements of addition_count(x), computed independently.
  std::uint64_t expected_digit_additions = 0;

  bool verified = false;
  std::vector<std::string> warnings;
  nlohmann::json extra = nlohmann::json::object();

  void finalize();
  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

// Times cache construction, direct per-element encryption and cached
// encryption of the same synthetic tensors. repetitions >= 3.
BenchReport bench_encrypt(const WorkloadSpec& spec, const CacheParams& cache,
                          const SchemeConfig& scheme, unsigned repetitions,
                          const BenchOptions& opts = {});

struct CacheBuildReport {
  std::vector<BenchReport> entries;  // one per bit width, in input order
  bool nondecreasing = false;
  bool at_most_linear = false;       // per-entry cost within kLinearSlack

  static constexpr double kLinearSlack = 1.5;

  nlohmann::json to_json() const;
};

CacheBuildReport bench_cache_build(unsigned radix,
                                   const std::vector<unsigned>& bit_widths,
                                   std::size_t zero_count,
                                   const SchemeConfig& scheme,
                                   unsigned repetitions, std::uint64_t seed);

struct FlRoundSpec {
  std::size_t client_count = 30;
  double fraction = 0.1;
  std::size_t model_size = 100;
  std::string distribution = "iid";  // carried into the report only
  std::uint64_t seed = 1;

  // round(client_count * fraction); throws ConfigError when < 1.
  std::size_t participants() const;
};

struct FlRoundResult {
  BenchReport report;
  std::size_t participants = 0;
  std::size_t mismatches = 0;
  bool exact = false;
};

// One aggregation round over signed-offset quantized weights. Both the
// directly encrypted and the cached ciphertexts are summed, decrypted,
// offset-corrected and compared element-wise with the plaintext sum.
// Throws CapacityError when k * 2^B >= M.
FlRoundResult fl_round(const FlRoundSpec& spec, const CacheParams& cache,
                       const SchemeConfig& scheme, const BenchOptions& opts = {});

// Deterministic weights for the round's participants (normal, sigma 0.5).
std::vector<RealTensor> synth_client_weights(const FlRoundSpec& spec);

}  // namespace chem
