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

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "chem/random.hpp"
#include "chem/scheme.hpp"

namespace chem {

/// Base-r expansion of a plaintext, least-significant digit first.
struct RadixDigits {
  std::vector<unsigned> digits;
  unsigned radix = 2;

  // Sum of digits[i] * radix^i.
  BigInt value() const;
  std::uint64_t digit_sum() const;
};

// floor(log_r m) for m >= 1: index of the highest radix power not above m.
std::size_t highest_radix_index(const BigInt& m, unsigned radix);

// digits[j] = floor(x / r^j) mod r for 0 <= j <= top_index.
// Throws RangeError unless 0 <= x <= r^(top_index+1) - 1.
RadixDigits radix_digits(const BigInt& x, unsigned radix, std::size_t top_index);

// Homomorphic additions needed to join the digit terms of x:
// (digit sum) - 1 for x > 0, 0 for x = 0. Randomizer additions excluded.
std::uint64_t addition_count(std::uint64_t x, unsigned radix,
                             std::size_t top_index);
std::uint64_t addition_count(const BigInt& x, unsigned radix,
                             std::size_t top_index);

struct CacheParams {
  unsigned radix = 2;
  unsigned bit_width = 16;            // message space [0, 2^B)
  std::size_t zero_count = 128;       // n_z
  std::size_t min_zero_inclusions = 1;
  std::uint64_t max_fan_in = 1;       // largest k-way sum the caller plans
};

/// Which pre-encrypted zeros a single cached encryption folds in.
struct ZeroMask {
  std::vector<bool> included;
  std::size_t count = 0;
};

/// Counters for one or more cached encryptions.
struct AssemblyStats {
  std::uint64_t digit_additions = 0;
  std::uint64_t randomizer_additions = 0;
  std::uint64_t zero_terms = 0;
  std::uint64_t encryptions = 0;

  AssemblyStats& operator+=(const AssemblyStats& o) {
    digit_additions += o.digit_additions;
    randomizer_additions += o.randomizer_additions;
    zero_terms += o.zero_terms;
    encryptions += o.encryptions;
    return *this;
  }
};

/// Pool of pre-encrypted radix powers he(r^i), 0 <= i <= floor(log_r(2^B-1)),
/// plus n_z independently encrypted zeros.
///
/// Immutable once built: any number of threads may call cached_encrypt on
/// the same cache, each with its own RandomSource.
class RadixCache {
 public:
  // Reassembles a cache from stored entries, validating every invariant that
  // can be checked without the secret key.
  static RadixCache from_entries(std::shared_ptr<const AdditiveScheme> scheme,
                                 const CacheParams& params,
                                 std::vector<Ciphertext> radix_ctxts,
                                 std::vector<Ciphertext> zero_ctxts);

  const AdditiveScheme& scheme() const { return *scheme_; }
  const std::shared_ptr<const AdditiveScheme>& scheme_ptr() const {
    return scheme_;
  }
  const CacheParams& params() const { return params_; }
  unsigned radix() const { return params_.radix; }
  unsigned bit_width() const { return params_.bit_width; }
  const BigInt& max_plain() const { return max_plain_; }
  std::size_t top_index() const { return top_index_; }

  const std::vector<Ciphertext>& radix_ctxts() const { return radix_ctxts_; }
  const std::vector<Ciphertext>& zero_ctxts() const { return zero_ctxts_; }

  // BLAKE2b-256 over every cached ciphertext byte and the parameters.
  std::array<std::uint8_t, 32> content_hash() const;
  // Hex of the first 16 bytes of content_hash().
  std::string fingerprint() const;

 private:
  friend RadixCache build_cache(std::shared_ptr<const AdditiveScheme>,
                                const CacheParams&, RandomSource&);

  RadixCache(std::shared_ptr<const AdditiveScheme> scheme,
             const CacheParams& params);

  std::shared_ptr<const AdditiveScheme> scheme_;
  CacheParams params_;
  BigInt max_plain_;
  std::size_t top_index_ = 0;
  std::vector<Ciphertext> radix_ctxts_;
  std::vector<Ciphertext> zero_ctxts_;
};

// Throws CapacityError when r^k or 2^B * max_fan_in does not fit below the
// scheme's plaintext modulus, ValidationError for malformed parameters.
RadixCache build_cache(std::shared_ptr<const AdditiveScheme> scheme,
                       const CacheParams& params, RandomSource& rng);

// Each zero included independently with probability 1/2, then topped up with
// uniformly chosen distinct indices until min_zero_inclusions is met.
ZeroMask draw_zero_mask(const RadixCache& cache, RandomSource& rng);

// Assembles a ciphertext of x purely from homomorphic additions over cache
// entries: radix_ctxts[i] added digits[i] times, then the masked zeros.
// Zero digits contribute nothing; x = 0 uses zero-pool entries only.
// Throws RangeError when x > max_plain.
Ciphertext cached_encrypt(const RadixCache& cache, const BigInt& x,
                          RandomSource& rng, AssemblyStats* stats = nullptr);
Ciphertext cached_encrypt(const RadixCache& cache, std::uint64_t x,
                          RandomSource& rng, AssemblyStats* stats = nullptr);

}  // namespace chem
