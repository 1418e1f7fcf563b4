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

#include "chem/paillier.hpp"

#include <utility>

#include "chem/errors.hpp"

namespace chem {
namespace {

constexpr int kMaxKeygenAttempts = 64;
constexpr int kPrimalityReps = 40;

BigInt invert(const BigInt& a, const BigInt& mod) {
  BigInt out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw ValidationError("value is not invertible");
  }
  return out;
}

BigInt powm(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

// L(u) = (u - 1) / d, exact division.
BigInt ell(const BigInt& u, const BigInt& d) {
  BigInt out = u - 1;
  mpz_divexact(out.get_mpz_t(), out.get_mpz_t(), d.get_mpz_t());
  return out;
}

BigInt random_prime(std::size_t nbits, RandomSource& rng) {
  BigInt candidate = rng.bits(nbits);
  mpz_setbit(candidate.get_mpz_t(), nbits - 1);
  mpz_setbit(candidate.get_mpz_t(), nbits - 2);
  mpz_setbit(candidate.get_mpz_t(), 0);
  BigInt prime;
  mpz_nextprime(prime.get_mpz_t(), candidate.get_mpz_t());
  return prime;
}

bool is_prime(const BigInt& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityReps) != 0;
}

const BigInt& single_part(const Ciphertext& c) {
  if (c.parts.size() != 1) {
    throw MalformedCiphertextError("Paillier ciphertext must have one component");
  }
  return c.parts.front();
}

void check_range(const PaillierPublicKey& pk, const Ciphertext& c) {
  const BigInt& v = single_part(c);
  if (v < 0 || v >= pk.n_squared) {
    throw MalformedCiphertextError("Paillier ciphertext outside [0, n^2)");
  }
}

}  // namespace

PaillierPublicKey PaillierPublicKey::from_modulus(const BigInt& n) {
  if (n < 15) throw ValidationError("Paillier modulus too small");
  PaillierPublicKey pk;
  pk.n = n;
  pk.n_squared = n * n;
  pk.g = n + 1;
  return pk;
}

std::uint64_t PaillierPublicKey::fingerprint() const {
  return chem::fingerprint("chem.paillier.pk", {&n});
}

PaillierKeyPair paillier_keypair_from_primes(const BigInt& p, const BigInt& q) {
  if (p == q) throw ValidationError("p and q must be distinct");
  if (p < 3 || q < 3 || mpz_even_p(p.get_mpz_t()) || mpz_even_p(q.get_mpz_t())) {
    throw ValidationError("p and q must be odd primes");
  }
  if (!is_prime(p) || !is_prime(q)) {
    throw ValidationError("p and q must be prime");
  }
  const BigInt n = p * q;
  const BigInt phi = (p - 1) * (q - 1);
  BigInt g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  if (g != 1) throw ValidationError("gcd(pq, (p-1)(q-1)) != 1");

  PaillierKeyPair kp;
  kp.public_key = PaillierPublicKey::from_modulus(n);
  kp.key_bits = kp.public_key.bits();

  PaillierSecretKey& sk = kp.secret_key;
  sk.p = p;
  sk.q = q;
  mpz_lcm(sk.lambda.get_mpz_t(), BigInt(p - 1).get_mpz_t(),
          BigInt(q - 1).get_mpz_t());
  sk.mu = invert(sk.lambda, n);

  sk.p_squared = p * p;
  sk.q_squared = q * q;
  const BigInt& gen = kp.public_key.g;
  sk.hp = invert(ell(powm(gen, p - 1, sk.p_squared), p), p);
  sk.hq = invert(ell(powm(gen, q - 1, sk.q_squared), q), q);
  sk.q_inv_p = invert(q, p);
  return kp;
}

PaillierKeyPair paillier_keygen(std::size_t key_bits, RandomSource& rng) {
  if (key_bits < 16) {
    throw ValidationError("key_bits must be at least 16");
  }
  const std::size_t p_bits = key_bits / 2;
  const std::size_t q_bits = key_bits - p_bits;
  for (int attempt = 0; attempt < kMaxKeygenAttempts; ++attempt) {
    BigInt p = random_prime(p_bits, rng);
    BigInt q = random_prime(q_bits, rng);
    if (p == q) continue;
    // nextprime may have walked past the intended width.
    if (mpz_sizeinbase(p.get_mpz_t(), 2) != p_bits ||
        mpz_sizeinbase(q.get_mpz_t(), 2) != q_bits) {
      continue;
    }
    if (mpz_sizeinbase(BigInt(p * q).get_mpz_t(), 2) != key_bits) continue;
    try {
      return paillier_keypair_from_primes(p, q);
    } catch (const ValidationError&) {
      continue;
    }
  }
  throw KeyGenerationError("prime generation failed after " +
                           std::to_string(kMaxKeygenAttempts) + " attempts");
}

Ciphertext paillier_encrypt(const PaillierPublicKey& pk, const BigInt& m,
                            RandomSource& rng) {
  if (m < 0 || m >= pk.n) throw RangeError("plaintext outside [0, n)");
  BigInt rho;
  BigInt gcd;
  for (;;) {
    rho = rng.below(pk.n);
    if (rho == 0) continue;
    mpz_gcd(gcd.get_mpz_t(), rho.get_mpz_t(), pk.n.get_mpz_t());
    if (gcd == 1) break;
  }
  // (1 + n)^m = 1 + m n (mod n^2)
  BigInt c = m * pk.n + 1;
  BigInt mask = powm(rho, pk.n, pk.n_squared);
  c *= mask;
  mpz_mod(c.get_mpz_t(), c.get_mpz_t(), pk.n_squared.get_mpz_t());
  Ciphertext out;
  out.context = pk.fingerprint();
  out.parts.push_back(std::move(c));
  return out;
}

Ciphertext paillier_add(const PaillierPublicKey& pk, const Ciphertext& c1,
                        const Ciphertext& c2) {
  if (c1.context != c2.context) {
    throw ContextError("ciphertexts belong to different key contexts");
  }
  check_range(pk, c1);
  check_range(pk, c2);
  Ciphertext out;
  out.context = c1.context;
  BigInt v = c1.parts.front() * c2.parts.front();
  mpz_mod(v.get_mpz_t(), v.get_mpz_t(), pk.n_squared.get_mpz_t());
  out.parts.push_back(std::move(v));
  return out;
}

BigInt paillier_decrypt(const PaillierKeyPair& kp, const Ciphertext& c) {
  check_range(kp.public_key, c);
  const PaillierSecretKey& sk = kp.secret_key;
  const BigInt& v = c.parts.front();

  BigInt mp = ell(powm(v, sk.p - 1, sk.p_squared), sk.p) * sk.hp;
  mpz_mod(mp.get_mpz_t(), mp.get_mpz_t(), sk.p.get_mpz_t());
  BigInt mq = ell(powm(v, sk.q - 1, sk.q_squared), sk.q) * sk.hq;
  mpz_mod(mq.get_mpz_t(), mq.get_mpz_t(), sk.q.get_mpz_t());

  BigInt h = (mp - mq) * sk.q_inv_p;
  mpz_mod(h.get_mpz_t(), h.get_mpz_t(), sk.p.get_mpz_t());
  return mq + h * sk.q;
}

BigInt paillier_decrypt_reference(const PaillierKeyPair& kp,
                                  const Ciphertext& c) {
  check_range(kp.public_key, c);
  const PaillierPublicKey& pk = kp.public_key;
  BigInt m = ell(powm(c.parts.front(), kp.secret_key.lambda, pk.n_squared), pk.n) *
             kp.secret_key.mu;
  mpz_mod(m.get_mpz_t(), m.get_mpz_t(), pk.n.get_mpz_t());
  return m;
}

PaillierScheme::PaillierScheme(PaillierPublicKey pk)
    : pk_(std::move(pk)), context_(pk_.fingerprint()) {}

Ciphertext PaillierScheme::encrypt(const BigInt& m, RandomSource& rng) const {
  check_plaintext(m);
  return paillier_encrypt(pk_, m, rng);
}

void PaillierScheme::add_inplace(Ciphertext& acc, const Ciphertext& c) const {
  check_context(acc);
  check_context(c);
  check_range(pk_, acc);
  check_range(pk_, c);
  mpz_ptr a = acc.parts.front().get_mpz_t();
  mpz_mul(a, a, c.parts.front().get_mpz_t());
  mpz_mod(a, a, pk_.n_squared.get_mpz_t());
}

void PaillierScheme::validate(const Ciphertext& c) const {
  check_context(c);
  check_range(pk_, c);
}

PaillierDecryptor::PaillierDecryptor(PaillierKeyPair kp)
    : kp_(std::move(kp)), context_(kp_.public_key.fingerprint()) {}

BigInt PaillierDecryptor::decrypt(const Ciphertext& c) const {
  if (c.context != context_) {
    throw ContextError("ciphertext belongs to a different key context");
  }
  return paillier_decrypt(kp_, c);
}

}  // namespace chem
