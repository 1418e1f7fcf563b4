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

#include "chem/scheme.hpp"

#include <vector>

#include <sodium.h>

#include "chem/debug_scheme.hpp"
#include "chem/errors.hpp"
#include "chem/paillier.hpp"

namespace chem {

void AdditiveScheme::check_plaintext(const BigInt& m) const {
  if (m < 0 || m >= plaintext_modulus()) {
    throw RangeError("plaintext outside [0, M)");
  }
}

void AdditiveScheme::check_context(const Ciphertext& c) const {
  if (c.context != context()) {
    throw ContextError("ciphertext belongs to a different key context");
  }
}

SchemeKind parse_scheme_kind(std::string_view name) {
  if (name == "paillier") return SchemeKind::paillier;
  if (name == "debug") return SchemeKind::debug;
  throw ConfigError("unknown scheme '" + std::string(name) +
                    "' (expected paillier or debug)");
}

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::paillier:
      return "paillier";
    case SchemeKind::debug:
      return "debug";
  }
  return "unknown";
}

SchemeBundle make_scheme(SchemeKind kind, std::size_t key_bits,
                         RandomSource& rng) {
  switch (kind) {
    case SchemeKind::paillier: {
      auto kp = paillier_keygen(key_bits, rng);
      auto scheme = std::make_shared<PaillierScheme>(kp.public_key);
      auto dec = std::make_shared<PaillierDecryptor>(std::move(kp));
      return {std::move(scheme), std::move(dec)};
    }
    case SchemeKind::debug: {
      auto key = debug_keygen(key_bits, rng);
      return {std::make_shared<DebugScheme>(key),
              std::make_shared<DebugDecryptor>(key)};
    }
  }
  throw ConfigError("unknown scheme kind");
}

std::uint64_t fingerprint(std::string_view tag,
                          std::initializer_list<const BigInt*> values) {
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, 8);
  crypto_generichash_update(
      &state, reinterpret_cast<const unsigned char*>(tag.data()), tag.size());
  for (const BigInt* v : values) {
    std::size_t count = 0;
    void* raw = mpz_export(nullptr, &count, 1, 1, 1, 0, v->get_mpz_t());
    const std::uint64_t len = count;
    unsigned char len_bytes[8];
    for (int i = 0; i < 8; ++i) len_bytes[i] = static_cast<unsigned char>(len >> (8 * i));
    crypto_generichash_update(&state, len_bytes, 8);
    if (raw != nullptr) {
      crypto_generichash_update(&state, static_cast<unsigned char*>(raw), count);
      void (*free_fn)(void*, std::size_t);
      mp_get_memory_functions(nullptr, nullptr, &free_fn);
      free_fn(raw, count);
    }
  }
  unsigned char out[8];
  crypto_generichash_final(&state, out, 8);
  std::uint64_t fp = 0;
  for (int i = 7; i >= 0; --i) fp = (fp << 8) | out[i];
  return fp;
}

}  // namespace chem
