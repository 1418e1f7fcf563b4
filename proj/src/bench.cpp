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

#include "chem/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "chem/errors.hpp"

namespace chem {
namespace {

using Clock = std::chrono::steady_clock;

// Intervals shorter than this are reported as unreliable.
constexpr double kMinReliableSeconds = 1e-4;

template <typename F>
double time_it(F&& f) {
  const auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_timer(const char* what, const TimingStats& t,
                 std::vector<std::string>& warnings) {
  if (!t.raw_seconds.empty() && t.mean() < kMinReliableSeconds) {
    warnings.push_back(std::string(what) +
                       ": mean below timer reliability threshold");
  }
}

std::uint64_t expected_additions(const TensorPlain& t, const RadixCache& cache) {
  std::uint64_t total = 0;
  for (std::uint64_t v : t.values) {
    total += addition_count(v, cache.radix(), cache.top_index());
  }
  return total;
}

nlohmann::json timing_json(const TimingStats& t) {
  return {{"mean_seconds", t.mean()},
          {"stddev_seconds", t.stddev()},
          {"raw_seconds", t.raw_seconds}};
}

nlohmann::json cache_json(const CacheParams& p) {
  return {{"radix", p.radix},
          {"bit_width", p.bit_width},
          {"zero_count", p.zero_count},
          {"min_zero_inclusions", p.min_zero_inclusions},
          {"max_fan_in", p.max_fan_in}};
}

// Untimed pass over a few elements of each path.
void warm_up(const AdditiveScheme& scheme, const RadixCache& cache,
             const TensorPlain& t, std::size_t elements, RandomSource& rng) {
  const std::size_t n = std::min(elements, t.values.size());
  for (std::size_t i = 0; i < n; ++i) {
    scheme.encrypt(BigInt(std::to_string(t.values[i])), rng);
    cached_encrypt(cache, t.values[i], rng);
  }
}

}  // namespace

WorkloadSpec WorkloadSpec::mnist() { return {"mnist", {28, 28}, 0.179, 8, 1, 1}; }

WorkloadSpec WorkloadSpec::stanford_cars() {
  return {"cars", {360, 640}, 0.9873, 8, 1, 1};
}

WorkloadSpec WorkloadSpec::cmu_arctic() {
  return {"arctic", {64, 321}, 0.9972, 8, 1, 1};
}

WorkloadSpec workload_preset(std::string_view name) {
  if (name == "mnist") return WorkloadSpec::mnist();
  if (name == "cars") return WorkloadSpec::stanford_cars();
  if (name == "arctic") return WorkloadSpec::cmu_arctic();
  throw ConfigError("unknown workload '" + std::string(name) +
                    "' (expected mnist, cars or arctic)");
}

TensorPlain synth_tensor(const WorkloadSpec& spec, RandomSource& rng) {
  if (spec.nonempty_rate < 0.0 || spec.nonempty_rate > 1.0) {
    throw ConfigError("nonempty_rate must lie in [0, 1]");
  }
  TensorPlain t;
  t.shape = spec.shape;
  t.quant = {1.0, spec.bit_width, QuantMode::unsigned_int};
  t.quant.validate();
  const std::size_t n = element_count(spec.shape);
  t.values.reserve(n);
  std::bernoulli_distribution nonzero(spec.nonempty_rate);
  const std::uint64_t top = t.quant.max_value();
  for (std::size_t i = 0; i < n; ++i) {
    if (nonzero(rng) && top >= 1) {
      t.values.push_back(1 + rng.below(top));
    } else {
      t.values.push_back(0);
    }
  }
  return t;
}

double nonempty_rate(const TensorPlain& t) {
  if (t.values.empty()) return 0.0;
  const auto nz = std::count_if(t.values.begin(), t.values.end(),
                                [](std::uint64_t v) { return v != 0; });
  return static_cast<double>(nz) / static_cast<double>(t.values.size());
}

double TimingStats::mean() const {
  if (raw_seconds.empty()) return 0.0;
  return std::accumulate(raw_seconds.begin(), raw_seconds.end(), 0.0) /
         static_cast<double>(raw_seconds.size());
}

double TimingStats::stddev() const {
  if (raw_seconds.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double v : raw_seconds) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(raw_seconds.size() - 1));
}

void BenchReport::finalize() {
  const double direct = direct_encrypt.mean();
  reduction_percent =
      direct > 0.0 ? 100.0 * (1.0 - cached_encrypt.mean() / direct) : 0.0;
  check_timer("cache_build", cache_build, warnings);
  check_timer("direct_encrypt", direct_encrypt, warnings);
  check_timer("cached_encrypt", cached_encrypt, warnings);
}

nlohmann::json BenchReport::to_json() const {
  return {{"workload", workload},
          {"scheme", scheme},
          {"key_bits", key_bits},
          {"cache", cache_json(cache)},
          {"seed", seed},
          {"workers", workers},
          {"repetitions", repetitions},
          {"elements", elements},
          {"measured_nonempty_rate", measured_nonempty_rate},
          {"cache_build", timing_json(cache_build)},
          {"direct_encrypt", timing_json(direct_encrypt)},
          {"cached_encrypt", timing_json(cached_encrypt)},
          {"reduction_percent", reduction_percent},
          {"counters",
           {{"digit_additions", digit_additions},
            {"randomizer_additions", randomizer_additions},
            {"expected_digit_additions", expected_digit_additions}}},
          {"verified", verified},
          {"warnings", warnings},
          {"extra", extra}};
}

std::string BenchReport::csv_header() {
  return "workload,scheme,key_bits,radix,bit_width,zero_count,repetitions,"
         "elements,nonempty_rate,cache_build_mean,cache_build_std,"
         "direct_mean,direct_std,cached_mean,cached_std,reduction_percent,"
         "digit_additions,randomizer_additions";
}

std::string BenchReport::csv_row() const {
  std::ostringstream out;
  out.precision(9);
  out << workload << ',' << scheme << ',' << key_bits << ',' << cache.radix << ','
      << cache.bit_width << ',' << cache.zero_count << ',' << repetitions << ','
      << elements << ',' << measured_nonempty_rate << ',' << cache_build.mean()
      << ',' << cache_build.stddev() << ',' << direct_encrypt.mean() << ','
      << direct_encrypt.stddev() << ',' << cached_encrypt.mean() << ','
      << cached_encrypt.stddev() << ',' << reduction_percent << ','
      << digit_additions << ',' << randomizer_additions;
  return out.str();
}

BenchReport bench_encrypt(const WorkloadSpec& spec, const CacheParams& params,
                          const SchemeConfig& scheme_cfg, unsigned repetitions,
                          const BenchOptions& opts) {
  if (repetitions < 3) throw ConfigError("bench_encrypt needs at least 3 repetitions");
  if (spec.bit_width > params.bit_width) {
    throw CapacityError("workload bit width exceeds cache bit width");
  }

  RandomSource workload_rng(spec.seed);
  std::vector<TensorPlain> samples;
  for (std::size_t s = 0; s < std::max<std::size_t>(spec.sample_count, 1); ++s) {
    samples.push_back(synth_tensor(spec, workload_rng));
  }

  RandomSource rng = RandomSource(spec.seed).split(1);
  const SchemeBundle bundle = make_scheme(scheme_cfg.kind, scheme_cfg.key_bits, rng);

  BenchReport report;
  report.workload = spec.name;
  report.scheme = std::string(bundle.scheme->id());
  report.key_bits = bundle.scheme->key_bits();
  report.cache = params;
  report.seed = spec.seed;
  report.workers = opts.workers;
  report.repetitions = repetitions;
  for (const auto& t : samples) report.elements += t.values.size();
  {
    std::size_t nz = 0;
    for (const auto& t : samples) {
      nz += std::count_if(t.values.begin(), t.values.end(),
                          [](std::uint64_t v) { return v != 0; });
    }
    report.measured_nonempty_rate =
        report.elements ? static_cast<double>(nz) / report.elements : 0.0;
  }

  for (unsigned rep = 0; rep < repetitions; ++rep) {
    std::optional<RadixCache> cache;
    report.cache_build.raw_seconds.push_back(
        time_it([&] { cache.emplace(build_cache(bundle.scheme, params, rng)); }));
    if (rep == 0) warm_up(*bundle.scheme, *cache, samples.front(),
                          opts.warmup_elements, rng);

    report.direct_encrypt.raw_seconds.push_back(time_it([&] {
      for (const auto& t : samples) encrypt_tensor_direct(*bundle.scheme, t, rng);
    }));

    std::vector<TensorCipher> outputs;
    outputs.reserve(samples.size());
    AssemblyStats stats;
    const EncryptOptions enc_opts{opts.workers, rep == 0 ? &stats : nullptr};
    report.cached_encrypt.raw_seconds.push_back(time_it([&] {
      for (const auto& t : samples) {
        outputs.push_back(encrypt_tensor(*cache, t, rng, enc_opts));
      }
    }));

    if (rep == 0) {
      bool ok = true;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        report.expected_digit_additions += expected_additions(samples[s], *cache);
        ok = ok && decrypt_tensor(*bundle.decryptor, outputs[s]).values ==
                       samples[s].values;
      }
      report.digit_additions = stats.digit_additions;
      report.randomizer_additions = stats.randomizer_additions;
      report.verified = ok;
    }
  }
  report.extra["nonempty_rate_target"] = spec.nonempty_rate;
  report.extra["shape"] = spec.shape;
  report.extra["sample_count"] = samples.size();
  report.finalize();
  return report;
}

nlohmann::json CacheBuildReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) arr.push_back(e.to_json());
  return {{"entries", arr},
          {"nondecreasing", nondecreasing},
          {"at_most_linear", at_most_linear},
          {"linear_slack", kLinearSlack}};
}

CacheBuildReport bench_cache_build(unsigned radix,
                                   const std::vector<unsigned>& bit_widths,
                                   std::size_t zero_count,
                                   const SchemeConfig& scheme_cfg,
                                   unsigned repetitions, std::uint64_t seed) {
  if (bit_widths.empty()) throw ConfigError("bit width list must not be empty");
  if (repetitions == 0) throw ConfigError("repetitions must be positive");
  RandomSource rng(seed);
  const SchemeBundle bundle = make_scheme(scheme_cfg.kind, scheme_cfg.key_bits, rng);

  // Untimed warm-up build.
  build_cache(bundle.scheme, {radix, bit_widths.front(), zero_count, 1, 1}, rng);

  CacheBuildReport out;
  std::vector<double> entry_counts;
  for (unsigned b : bit_widths) {
    BenchReport r;
    r.workload = "cache-build-B" + std::to_string(b);
    r.scheme = std::string(bundle.scheme->id());
    r.key_bits = bundle.scheme->key_bits();
    r.cache = {radix, b, zero_count, 1, 1};
    r.seed = seed;
    r.repetitions = repetitions;
    std::size_t entries = 0;
    for (unsigned rep = 0; rep < repetitions; ++rep) {
      r.cache_build.raw_seconds.push_back(time_it([&] {
        const RadixCache cache = build_cache(bundle.scheme, r.cache, rng);
        entries = cache.radix_ctxts().size() + cache.zero_ctxts().size();
      }));
    }
    r.elements = entries;
    r.extra["radix_entries"] = entries - zero_count;
    r.extra["total_entries"] = entries;
    r.finalize();
    entry_counts.push_back(static_cast<double>(entries));
    out.entries.push_back(std::move(r));
  }

  out.nondecreasing = true;
  out.at_most_linear = true;
  const double base_per_entry = out.entries.front().cache_build.mean() / entry_counts.front();
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    const double t = out.entries[i].cache_build.mean();
    if (i > 0 && t < out.entries[i - 1].cache_build.mean()) out.nondecreasing = false;
    if (t > CacheBuildReport::kLinearSlack * base_per_entry * entry_counts[i]) {
      out.at_most_linear = false;
    }
  }
  return out;
}

std::size_t FlRoundSpec::participants() const {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ConfigError("fraction must lie in (0, 1]");
  }
  const auto k = static_cast<std::size_t>(
      std::llround(static_cast<double>(client_count) * fraction));
  if (k < 1) throw ConfigError("round(client_count * fraction) must be at least 1");
  return k;
}

std::vector<RealTensor> synth_client_weights(const FlRoundSpec& spec) {
  RandomSource rng = RandomSource(spec.seed).split(7);
  std::normal_distribution<double> dist(0.0, 0.5);
  std::vector<RealTensor> out(spec.participants());
  for (auto& t : out) {
    t.shape = {spec.model_size};
    t.values.resize(spec.model_size);
    for (double& v : t.values) v = dist(rng);
  }
  return out;
}

FlRoundResult fl_round(const FlRoundSpec& spec, const CacheParams& params,
                       const SchemeConfig& scheme_cfg, const BenchOptions& opts) {
  const std::size_t k = spec.participants();
  RandomSource rng = RandomSource(spec.seed).split(1);
  const SchemeBundle bundle = make_scheme(scheme_cfg.kind, scheme_cfg.key_bits, rng);

  BigInt span;
  mpz_ui_pow_ui(span.get_mpz_t(), 2, params.bit_width);
  span *= static_cast<unsigned long>(k);
  if (span >= bundle.scheme->plaintext_modulus()) {
    throw CapacityError("k * 2^B must be below the plaintext modulus");
  }

  CacheParams cache_params = params;
  cache_params.max_fan_in = std::max<std::uint64_t>(params.max_fan_in, k);
  QuantParams quant = QuantParams::weights();
  quant.bit_width = params.bit_width;
  quant.validate();

  std::vector<TensorPlain> plains;
  for (const RealTensor& w : synth_client_weights(spec)) {
    plains.push_back(quantize(w, quant));
  }

  FlRoundResult result;
  result.participants = k;
  BenchReport& report = result.report;
  report.workload = "fl-round";
  report.scheme = std::string(bundle.scheme->id());
  report.key_bits = bundle.scheme->key_bits();
  report.cache = cache_params;
  report.seed = spec.seed;
  report.workers = opts.workers;
  report.repetitions = 1;
  report.elements = k * spec.model_size;
  report.measured_nonempty_rate = 1.0;

  std::optional<RadixCache> cache;
  report.cache_build.raw_seconds.push_back(
      time_it([&] { cache.emplace(build_cache(bundle.scheme, cache_params, rng)); }));
  warm_up(*bundle.scheme, *cache, plains.front(), opts.warmup_elements, rng);

  std::vector<TensorCipher> direct;
  report.direct_encrypt.raw_seconds.push_back(time_it([&] {
    for (const auto& p : plains) direct.push_back(encrypt_tensor_direct(*bundle.scheme, p, rng));
  }));

  AssemblyStats stats;
  std::vector<TensorCipher> cached;
  report.cached_encrypt.raw_seconds.push_back(time_it([&] {
    for (const auto& p : plains) {
      cached.push_back(encrypt_tensor(*cache, p, rng, {opts.workers, &stats}));
    }
  }));
  report.digit_additions = stats.digit_additions;
  report.randomizer_additions = stats.randomizer_additions;
  for (const auto& p : plains) {
    for (std::uint64_t v : p.values) {
      report.expected_digit_additions +=
          addition_count(v, cache->radix(), cache->top_index());
    }
  }

  // Plaintext-side oracle: sum of signed quantized values.
  const auto offset = static_cast<std::int64_t>(quant.offset());
  std::vector<std::int64_t> expected(spec.model_size, 0);
  for (const auto& p : plains) {
    for (std::size_t i = 0; i < spec.model_size; ++i) {
      expected[i] += static_cast<std::int64_t>(p.values[i]) - offset;
    }
  }

  auto check = [&](const std::vector<TensorCipher>& cts) {
    TensorCipher sum = cts.front();
    for (std::size_t c = 1; c < cts.size(); ++c) {
      sum = add_tensors(*bundle.scheme, sum, cts[c]);
    }
    const TensorPlain agg = decrypt_tensor(*bundle.decryptor, sum);
    const auto correction = static_cast<std::int64_t>(k) * offset;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < spec.model_size; ++i) {
      if (static_cast<std::int64_t>(agg.values[i]) - correction != expected[i]) ++bad;
    }
    return bad;
  };
  result.mismatches = check(cached) + check(direct);
  result.exact = result.mismatches == 0;
  report.verified = result.exact;

  report.extra["client_count"] = spec.client_count;
  report.extra["fraction"] = spec.fraction;
  report.extra["participants"] = k;
  report.extra["model_size"] = spec.model_size;
  report.extra["distribution"] = spec.distribution;
  report.extra["mismatches"] = result.mismatches;
  report.finalize();
  return result;
}

}  // namespace chem
