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

#include <cstdint>

#include "chem/scheme.hpp"

namespace chem {

/// NOT SECURE. Transparent additive scheme for fast tests of the cache layer.
///
/// A ciphertext is (m mod M, nonce) and addition is component-wise, with the
/// nonce accumulated as an unbounded integer. Encryption is still
/// probabilistic (fresh 64-bit nonce), so randomization properties of the
/// cache can be checked without paying for Paillier.
struct DebugKey {
  BigInt modulus;
  std::uint64_t key_id = 0;

  std::uint64_t fingerprint() const;
};

DebugKey debug_keygen(std::size_t modulus_bits, RandomSource& rng);

class DebugScheme final : public AdditiveScheme {
 public:
  explicit DebugScheme(DebugKey key);

  std::string_view id() const override { return "debug"; }
  std::uint64_t context() const override { return context_; }
  const BigInt& plaintext_modulus() const override { return key_.modulus; }
  std::size_t key_bits() const override {
    return mpz_sizeinbase(key_.modulus.get_mpz_t(), 2);
  }

  Ciphertext encrypt(const BigInt& m, RandomSource& rng) const override;
  void add_inplace(Ciphertext& acc, const Ciphertext& c) const override;
  void validate(const Ciphertext& c) const override;

  const DebugKey& key() const { return key_; }

 private:
  DebugKey key_;
  std::uint64_t context_;
};

class DebugDecryptor final : public Decryptor {
 public:
  explicit DebugDecryptor(DebugKey key);

  std::uint64_t context() const override { return context_; }
  BigInt decrypt(const Ciphertext& c) const override;

 private:
  DebugKey key_;
  std::uint64_t context_;
};

}  // namespace chem
