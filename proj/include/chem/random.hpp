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
#include <limits>
#include <span>

#include <gmpxx.h>

namespace chem {

using BigInt = mpz_class;

/// Seedable ChaCha20 keystream generator.
///
/// Every operation that needs randomness takes a RandomSource by reference;
/// the library never keeps a global generator. Copies continue the same
/// stream independently, which makes "same state, same draw" checks trivial.
/// Satisfies std::uniform_random_bit_generator so it plugs into <random>
/// distributions.
class RandomSource {
 public:
  using result_type = std::uint64_t;
  using Key = std::array<std::uint8_t, 32>;

  explicit RandomSource(std::uint64_t seed);
  explicit RandomSource(const Key& key);

  // Seeded from the operating system.
  static RandomSource from_entropy();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  void fill(std::span<std::uint8_t> out);

  bool coin();

  // Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 2^bits).
  BigInt bits(std::size_t nbits);

  // Uniform in [0, bound), bound > 0.
  BigInt below(const BigInt& bound);

  // Independent child stream; depends only on this stream's key and `stream`,
  // not on how much has been drawn.
  RandomSource split(std::uint64_t stream) const;

  // Draws a fresh key from this stream and returns a generator keyed by it.
  RandomSource fork();

 private:
  void refill();

  Key key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, 512> buffer_{};
  std::size_t pos_ = buffer_.size();
  std::uint64_t coin_bits_ = 0;
  unsigned coin_left_ = 0;
};

}  // namespace chem
