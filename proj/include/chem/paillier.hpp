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

#include "chem/random.hpp"
#include "chem/scheme.hpp"

namespace chem {

struct PaillierPublicKey {
  BigInt n;          // p * q
  BigInt n_squared;  // n^2
  BigInt g;          // n + 1

  std::size_t bits() const { return mpz_sizeinbase(n.get_mpz_t(), 2); }
  std::uint64_t fingerprint() const;

  static PaillierPublicKey from_modulus(const BigInt& n);
};

struct PaillierSecretKey {
  BigInt p;
  BigInt q;
  BigInt lambda;  // lcm(p - 1, q - 1)
  BigInt mu;      // lambda^-1 mod n

  // CRT decryption constants.
  BigInt p_squared;
  BigInt q_squared;
  BigInt hp;      // L_p(g^(p-1) mod p^2)^-1 mod p
  BigInt hq;
  BigInt q_inv_p; // q^-1 mod p
};

struct PaillierKeyPair {
  PaillierPublicKey public_key;
  PaillierSecretKey secret_key;
  std::size_t key_bits = 0;
};

// Distinct odd primes p, q with gcd(pq, (p-1)(q-1)) = 1; throws
// ValidationError otherwise.
PaillierKeyPair paillier_keypair_from_primes(const BigInt& p, const BigInt& q);

// key_bits >= 16. Both primes are key_bits/2 wide with the top two bits set,
// so n has exactly key_bits bits. Throws KeyGenerationError after a bounded
// number of failed attempts.
PaillierKeyPair paillier_keygen(std::size_t key_bits, RandomSource& rng);

// c = (1 + n)^m * rho^n mod n^2, rho uniform over the units mod n.
Ciphertext paillier_encrypt(const PaillierPublicKey& pk, const BigInt& m,
                            RandomSource& rng);

// c1 * c2 mod n^2.
Ciphertext paillier_add(const PaillierPublicKey& pk, const Ciphertext& c1,
                        const Ciphertext& c2);

// CRT-accelerated decryption.
BigInt paillier_decrypt(const PaillierKeyPair& kp, const Ciphertext& c);

// Textbook L(c^lambda mod n^2) * mu mod n. Slower; kept as an independent
// route for cross-checking the CRT path.
BigInt paillier_decrypt_reference(const PaillierKeyPair& kp,
                                  const Ciphertext& c);

class PaillierScheme final : public AdditiveScheme {
 public:
  explicit PaillierScheme(PaillierPublicKey pk);

  std::string_view id() const override { return "paillier"; }
  std::uint64_t context() const override { return context_; }
  const BigInt& plaintext_modulus() const override { return pk_.n; }
  std::size_t key_bits() const override { return pk_.bits(); }

  Ciphertext encrypt(const BigInt& m, RandomSource& rng) const override;
  void add_inplace(Ciphertext& acc, const Ciphertext& c) const override;
  void validate(const Ciphertext& c) const override;

  const PaillierPublicKey& public_key() const { return pk_; }

 private:
  PaillierPublicKey pk_;
  std::uint64_t context_;
};

class PaillierDecryptor final : public Decryptor {
 public:
  explicit PaillierDecryptor(PaillierKeyPair kp);

  std::uint64_t context() const override { return context_; }
  BigInt decrypt(const Ciphertext& c) const override;

  const PaillierKeyPair& key_pair() const { return kp_; }

 private:
  PaillierKeyPair kp_;
  std::uint64_t context_;
};

}  // namespace chem
