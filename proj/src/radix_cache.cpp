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

#include "chem/radix_cache.hpp"

#include <utility>

#include <sodium.h>

#include "chem/errors.hpp"

namespace chem {
namespace {

constexpr unsigned kMaxRadix = 1u << 16;

void hash_u64(crypto_generichash_state& state, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  crypto_generichash_update(&state, b, 8);
}

void hash_bigint(crypto_generichash_state& state, const BigInt& v) {
  std::size_t count = 0;
  void* raw = mpz_export(nullptr, &count, 1, 1, 1, 0, v.get_mpz_t());
  hash_u64(state, count);
  if (raw != nullptr) {
    crypto_generichash_update(&state, static_cast<unsigned char*>(raw), count);
    void (*free_fn)(void*, std::size_t);
    mp_get_memory_functions(nullptr, nullptr, &free_fn);
    free_fn(raw, count);
  }
}

void hash_ciphertext(crypto_generichash_state& state, const Ciphertext& c) {
  hash_u64(state, c.context);
  hash_u64(state, c.parts.size());
  for (const auto& p : c.parts) hash_bigint(state, p);
}

void check_params(const CacheParams& params) {
  if (params.radix < 2 || params.radix > kMaxRadix) {
    throw ValidationError("radix must lie in [2, 65536]");
  }
  if (params.bit_width == 0) throw ValidationError("bit_width must be positive");
  if (params.zero_count == 0) throw ValidationError("zero_count must be positive");
  if (params.min_zero_inclusions > params.zero_count) {
    throw ValidationError("min_zero_inclusions exceeds zero_count");
  }
  if (params.max_fan_in == 0) throw ValidationError("max_fan_in must be positive");
}

void check_capacity(const AdditiveScheme& scheme, const CacheParams& params,
                    std::size_t top_index) {
  const BigInt& modulus = scheme.plaintext_modulus();
  BigInt top_power;
  mpz_ui_pow_ui(top_power.get_mpz_t(), params.radix, top_index);
  if (top_power >= modulus) {
    throw CapacityError("radix power r^" + std::to_string(top_index) +
                        " does not fit below the plaintext modulus");
  }
  BigInt span;
  mpz_ui_pow_ui(span.get_mpz_t(), 2, params.bit_width);
  span *= BigInt(std::to_string(params.max_fan_in));
  if (span >= modulus) {
    throw CapacityError("2^B * max_fan_in must be below the plaintext modulus");
  }
}

}  // namespace

BigInt RadixDigits::value() const {
  BigInt out = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    out *= radix;
    out += *it;
  }
  return out;
}

std::uint64_t RadixDigits::digit_sum() const {
  std::uint64_t s = 0;
  for (unsigned d : digits) s += d;
  return s;
}

std::size_t highest_radix_index(const BigInt& m, unsigned radix) {
  if (radix < 2) throw ValidationError("radix must be at least 2");
  if (m < 1) throw RangeError("highest_radix_index needs m >= 1");
  std::size_t k = 0;
  BigInt power = radix;
  while (power <= m) {
    power *= radix;
    ++k;
  }
  return k;
}

RadixDigits radix_digits(const BigInt& x, unsigned radix, std::size_t top_index) {
  if (radix < 2 || radix > kMaxRadix) {
    throw ValidationError("radix must lie in [2, 65536]");
  }
  if (x < 0) throw RangeError("negative plaintext");
  RadixDigits out;
  out.radix = radix;
  out.digits.resize(top_index + 1);
  BigInt rest = x;
  for (std::size_t j = 0; j <= top_index; ++j) {
    out.digits[j] = static_cast<unsigned>(
        mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), radix));
  }
  if (rest != 0) {
    throw RangeError("plaintext exceeds r^(k+1) - 1");
  }
  return out;
}

std::uint64_t addition_count(std::uint64_t x, unsigned radix,
                             std::size_t top_index) {
  if (radix < 2) throw ValidationError("radix must be at least 2");
  if (x == 0) return 0;
  std::uint64_t sum = 0;
  for (std::size_t j = 0; j <= top_index && x != 0; ++j) {
    sum += x % radix;
    x /= radix;
  }
  if (x != 0) throw RangeError("plaintext exceeds r^(k+1) - 1");
  return sum - 1;
}

std::uint64_t addition_count(const BigInt& x, unsigned radix,
                             std::size_t top_index) {
  const std::uint64_t sum = radix_digits(x, radix, top_index).digit_sum();
  return sum == 0 ? 0 : sum - 1;
}

RadixCache::RadixCache(std::shared_ptr<const AdditiveScheme> scheme,
                       const CacheParams& params)
    : scheme_(std::move(scheme)), params_(params) {
  if (!scheme_) throw ValidationError("cache needs a scheme");
  check_params(params_);
  mpz_ui_pow_ui(max_plain_.get_mpz_t(), 2, params_.bit_width);
  max_plain_ -= 1;
  top_index_ = highest_radix_index(max_plain_, params_.radix);
  check_capacity(*scheme_, params_, top_index_);
}

RadixCache build_cache(std::shared_ptr<const AdditiveScheme> scheme,
                       const CacheParams& params, RandomSource& rng) {
  RadixCache cache(std::move(scheme), params);
  const AdditiveScheme& he = *cache.scheme_;

  cache.radix_ctxts_.reserve(cache.top_index_ + 1);
  BigInt power = 1;
  for (std::size_t i = 0; i <= cache.top_index_; ++i) {
    cache.radix_ctxts_.push_back(he.encrypt(power, rng));
    power *= params.radix;
  }
  cache.zero_ctxts_.reserve(params.zero_count);
  const BigInt zero = 0;
  for (std::size_t j = 0; j < params.zero_count; ++j) {
    cache.zero_ctxts_.push_back(he.encrypt(zero, rng));
  }
  return cache;
}

RadixCache RadixCache::from_entries(std::shared_ptr<const AdditiveScheme> scheme,
                                    const CacheParams& params,
                                    std::vector<Ciphertext> radix_ctxts,
                                    std::vector<Ciphertext> zero_ctxts) {
  RadixCache cache(std::move(scheme), params);
  if (radix_ctxts.size() != cache.top_index_ + 1) {
    throw ValidationError("radix entry count does not match floor(log_r m) + 1");
  }
  if (zero_ctxts.size() != params.zero_count) {
    throw ValidationError("zero entry count does not match zero_count");
  }
  for (const auto& c : radix_ctxts) cache.scheme_->validate(c);
  for (const auto& c : zero_ctxts) cache.scheme_->validate(c);
  cache.radix_ctxts_ = std::move(radix_ctxts);
  cache.zero_ctxts_ = std::move(zero_ctxts);
  return cache;
}

std::array<std::uint8_t, 32> RadixCache::content_hash() const {
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, 32);
  hash_u64(state, params_.radix);
  hash_u64(state, params_.bit_width);
  hash_u64(state, params_.zero_count);
  hash_u64(state, params_.min_zero_inclusions);
  hash_u64(state, params_.max_fan_in);
  hash_u64(state, scheme_->context());
  for (const auto& c : radix_ctxts_) hash_ciphertext(state, c);
  for (const auto& c : zero_ctxts_) hash_ciphertext(state, c);
  std::array<std::uint8_t, 32> out;
  crypto_generichash_final(&state, out.data(), out.size());
  return out;
}

std::string RadixCache::fingerprint() const {
  static constexpr char kHex[] = "0123456789abcdef";
  const auto h = content_hash();
  std::string out;
  out.reserve(32);
  for (std::size_t i = 0; i < 16; ++i) {
    out.push_back(kHex[h[i] >> 4]);
    out.push_back(kHex[h[i] & 0xF]);
  }
  return out;
}

ZeroMask draw_zero_mask(const RadixCache& cache, RandomSource& rng) {
  const std::size_t n = cache.zero_ctxts().size();
  ZeroMask mask;
  mask.included.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (rng.coin()) {
      mask.included[j] = true;
      ++mask.count;
    }
  }
  const std::size_t floor = cache.params().min_zero_inclusions;
  while (mask.count < floor) {
    // Pick uniformly among the indices not yet included.
    std::uint64_t pick = rng.below(n - mask.count);
    for (std::size_t j = 0; j < n; ++j) {
      if (mask.included[j]) continue;
      if (pick-- == 0) {
        mask.included[j] = true;
        ++mask.count;
        break;
      }
    }
  }
  return mask;
}

Ciphertext cached_encrypt(const RadixCache& cache, const BigInt& x,
                          RandomSource& rng, AssemblyStats* stats) {
  if (x < 0 || x > cache.max_plain()) {
    throw RangeError("plaintext outside [0, 2^B - 1]");
  }
  const AdditiveScheme& he = cache.scheme();
  const RadixDigits digits = radix_digits(x, cache.radix(), cache.top_index());

  Ciphertext acc;
  bool seeded = false;
  AssemblyStats local;
  local.encryptions = 1;

  const auto& radixes = cache.radix_ctxts();
  for (std::size_t k = 0; k < digits.digits.size(); ++k) {
    for (unsigned j = 0; j < digits.digits[k]; ++j) {
      if (!seeded) {
        acc = radixes[k];
        seeded = true;
      } else {
        he.add_inplace(acc, radixes[k]);
        ++local.digit_additions;
      }
    }
  }

  const ZeroMask mask = draw_zero_mask(cache, rng);
  const auto& zeros = cache.zero_ctxts();
  for (std::size_t j = 0; j < zeros.size(); ++j) {
    if (!mask.included[j]) continue;
    if (!seeded) {
      acc = zeros[j];
      seeded = true;
    } else {
      he.add_inplace(acc, zeros[j]);
      ++local.randomizer_additions;
    }
  }
  local.zero_terms = mask.count;

  if (!seeded) {
    // x = 0, min_zero_inclusions = 0 and an empty draw.
    acc = zeros.front();
  }
  if (stats != nullptr) *stats += local;
  return acc;
}

Ciphertext cached_encrypt(const RadixCache& cache, std::uint64_t x,
                          RandomSource& rng, AssemblyStats* stats) {
  BigInt big;
  mpz_import(big.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
  return cached_encrypt(cache, big, rng, stats);
}

}  // namespace chem
