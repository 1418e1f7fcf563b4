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

#include "chem/random.hpp"

#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include <sodium.h>

namespace chem {
namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) {
    throw std::runtime_error("libsodium initialization failed");
  }
}

RandomSource::Key derive_key(std::span<const std::uint8_t> material) {
  RandomSource::Key key;
  crypto_generichash(key.data(), key.size(), material.data(), material.size(),
                     nullptr, 0);
  return key;
}

std::array<std::uint8_t, 8> le_bytes(std::uint64_t v) {
  std::array<std::uint8_t, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) {
  ensure_sodium();
  static constexpr char kDomain[] = "chem.random.seed";
  std::array<std::uint8_t, sizeof(kDomain) - 1 + 8> material;
  std::memcpy(material.data(), kDomain, sizeof(kDomain) - 1);
  auto le = le_bytes(seed);
  std::memcpy(material.data() + sizeof(kDomain) - 1, le.data(), 8);
  key_ = derive_key(material);
}

RandomSource::RandomSource(const Key& key) : key_(key) { ensure_sodium(); }

RandomSource RandomSource::from_entropy() {
  ensure_sodium();
  Key key;
  randombytes_buf(key.data(), key.size());
  return RandomSource(key);
}

void RandomSource::refill() {
  static const std::array<std::uint8_t, 512> zeros{};
  static constexpr std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES>
      nonce{};
  crypto_stream_chacha20_xor_ic(buffer_.data(), zeros.data(), buffer_.size(),
                                nonce.data(), block_, key_.data());
  block_ += buffer_.size() / 64;
  pos_ = 0;
}

void RandomSource::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buffer_.size()) refill();
    std::size_t n = std::min(out.size() - done, buffer_.size() - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

RandomSource::result_type RandomSource::operator()() {
  std::array<std::uint8_t, 8> b;
  fill(b);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

bool RandomSource::coin() {
  if (coin_left_ == 0) {
    coin_bits_ = (*this)();
    coin_left_ = 64;
  }
  bool bit = coin_bits_ & 1u;
  coin_bits_ >>= 1;
  --coin_left_;
  return bit;
}

std::uint64_t RandomSource::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RandomSource::below: zero bound");
  // Lemire-style rejection on the low end keeps the draw unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t v = (*this)();
    if (v >= threshold) return v % bound;
  }
}

BigInt RandomSource::bits(std::size_t nbits) {
  if (nbits == 0) return 0;
  std::vector<std::uint8_t> bytes((nbits + 7) / 8);
  fill(bytes);
  const unsigned excess = static_cast<unsigned>(bytes.size() * 8 - nbits);
  bytes[0] &= static_cast<std::uint8_t>(0xFFu >> excess);
  BigInt out;
  mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

BigInt RandomSource::below(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("RandomSource::below: bound must be positive");
  const std::size_t nbits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  for (;;) {
    BigInt v = bits(nbits);
    if (v < bound) return v;
  }
}

RandomSource RandomSource::split(std::uint64_t stream) const {
  std::array<std::uint8_t, 32 + 8> material;
  std::memcpy(material.data(), key_.data(), key_.size());
  auto le = le_bytes(stream);
  std::memcpy(material.data() + key_.size(), le.data(), 8);
  return RandomSource(derive_key(material));
}

RandomSource RandomSource::fork() {
  Key key;
  fill(key);
  return RandomSource(key);
}

}  // namespace chem
