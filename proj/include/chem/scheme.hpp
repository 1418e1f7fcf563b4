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
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chem/random.hpp"

namespace chem {

/// Opaque encrypted value.
///
/// `context` is the fingerprint of the public key the value was produced
/// under; `parts` holds the scheme-specific integers (one for Paillier,
/// plaintext-sum and nonce-sum for the debug scheme).
struct Ciphertext {
  std::uint64_t context = 0;
  std::vector<BigInt> parts;

  bool operator==(const Ciphertext& other) const {
    return context == other.context && parts == other.parts;
  }
};

/// Public half of an additively homomorphic, probabilistic cryptosystem:
/// he(a) (+) he(b) = he(a + b mod M).
///
/// Implementations are immutable after construction and safe for concurrent
/// use; each caller brings its own RandomSource.
class AdditiveScheme {
 public:
  virtual ~AdditiveScheme() = default;

  virtual std::string_view id() const = 0;

  // Public-key fingerprint stamped into every ciphertext.
  virtual std::uint64_t context() const = 0;

  // Plaintext modulus M; messages live in [0, M).
  virtual const BigInt& plaintext_modulus() const = 0;

  // Bit length of the public key material (key_bits for Paillier).
  virtual std::size_t key_bits() const = 0;

  virtual Ciphertext encrypt(const BigInt& m, RandomSource& rng) const = 0;

  // acc <- acc (+) c. Both operands must carry this scheme's context.
  virtual void add_inplace(Ciphertext& acc, const Ciphertext& c) const = 0;

  // Throws ContextError or MalformedCiphertextError.
  virtual void validate(const Ciphertext& c) const = 0;

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const {
    Ciphertext out = a;
    add_inplace(out, b);
    return out;
  }

 protected:
  void check_plaintext(const BigInt& m) const;
  void check_context(const Ciphertext& c) const;
};

/// Secret half: recovers plaintexts from ciphertexts of the matching scheme.
class Decryptor {
 public:
  virtual ~Decryptor() = default;
  virtual std::uint64_t context() const = 0;
  virtual BigInt decrypt(const Ciphertext& c) const = 0;
};

enum class SchemeKind { paillier, debug };

SchemeKind parse_scheme_kind(std::string_view name);
std::string_view to_string(SchemeKind kind);

/// A freshly generated key pair behind the generic interfaces.
struct SchemeBundle {
  std::shared_ptr<const AdditiveScheme> scheme;
  std::shared_ptr<const Decryptor> decryptor;
};

// key_bits is the Paillier modulus size, or the debug plaintext modulus
// exponent (M = 2^key_bits).
SchemeBundle make_scheme(SchemeKind kind, std::size_t key_bits,
                         RandomSource& rng);

// First 8 bytes of BLAKE2b over the given integers, domain-separated by tag.
std::uint64_t fingerprint(std::string_view tag,
                          std::initializer_list<const BigInt*> values);

}  // namespace chem
