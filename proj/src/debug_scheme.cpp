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

#include "chem/debug_scheme.hpp"

#include <utility>

#include "chem/errors.hpp"

namespace chem {
namespace {

void check_shape(const Ciphertext& c, const BigInt& modulus) {
  if (c.parts.size() != 2) {
    throw MalformedCiphertextError("debug ciphertext must have two components");
  }
  if (c.parts[0] < 0 || c.parts[0] >= modulus || c.parts[1] < 0) {
    throw MalformedCiphertextError("debug ciphertext component out of range");
  }
}

}  // namespace

std::uint64_t DebugKey::fingerprint() const {
  const BigInt id = key_id;
  return chem::fingerprint("chem.debug.key", {&modulus, &id});
}

DebugKey debug_keygen(std::size_t modulus_bits, RandomSource& rng) {
  if (modulus_bits < 2) throw ValidationError("debug modulus needs at least 2 bits");
  DebugKey key;
  mpz_ui_pow_ui(key.modulus.get_mpz_t(), 2, modulus_bits);
  key.key_id = rng();
  return key;
}

DebugScheme::DebugScheme(DebugKey key)
    : key_(std::move(key)), context_(key_.fingerprint()) {}

Ciphertext DebugScheme::encrypt(const BigInt& m, RandomSource& rng) const {
  check_plaintext(m);
  Ciphertext out;
  out.context = context_;
  out.parts.reserve(2);
  out.parts.push_back(m);
  BigInt nonce;
  mpz_set_ui(nonce.get_mpz_t(), 0);
  const std::uint64_t raw = rng();
  mpz_import(nonce.get_mpz_t(), 1, 1, sizeof(raw), 0, 0, &raw);
  out.parts.push_back(std::move(nonce));
  return out;
}

void DebugScheme::add_inplace(Ciphertext& acc, const Ciphertext& c) const {
  check_context(acc);
  check_context(c);
  check_shape(acc, key_.modulus);
  check_shape(c, key_.modulus);
  acc.parts[0] += c.parts[0];
  if (acc.parts[0] >= key_.modulus) acc.parts[0] -= key_.modulus;
  acc.parts[1] += c.parts[1];
}

void DebugScheme::validate(const Ciphertext& c) const {
  check_context(c);
  check_shape(c, key_.modulus);
}

DebugDecryptor::DebugDecryptor(DebugKey key)
    : key_(std::move(key)), context_(key_.fingerprint()) {}

BigInt DebugDecryptor::decrypt(const Ciphertext& c) const {
  if (c.context != context_) {
    throw ContextError("ciphertext belongs to a different key context");
  }
  check_shape(c, key_.modulus);
  return c.parts[0];
}

}  // namespace chem
