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

#include "chem/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "chem/errors.hpp"

namespace chem {
namespace {

constexpr std::size_t kChunk = 64;

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    throw RangeError("decrypted value does not fit in 64 bits");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

void check_layout(const std::vector<std::size_t>& shape, std::size_t n) {
  if (element_count(shape) != n) {
    throw ValidationError("value count does not match shape");
  }
}

}  // namespace

std::uint64_t QuantParams::offset() const {
  return mode == QuantMode::signed_offset ? (std::uint64_t{1} << (bit_width - 1))
                                          : 0;
}

std::uint64_t QuantParams::max_value() const {
  return (std::uint64_t{1} << bit_width) - 1;
}

void QuantParams::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("quantization scale must be positive and finite");
  }
  if (bit_width < 1 || bit_width > 53) {
    throw ValidationError("quantization bit width must lie in [1, 53]");
  }
}

QuantParams QuantParams::weights() {
  return {std::ldexp(1.0, -8), 16, QuantMode::signed_offset};
}

QuantParams QuantParams::pixels() { return {1.0, 8, QuantMode::unsigned_int}; }

std::size_t element_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

TensorPlain quantize(const RealTensor& t, const QuantParams& quant) {
  quant.validate();
  check_layout(t.shape, t.values.size());
  TensorPlain out;
  out.shape = t.shape;
  out.quant = quant;
  out.values.reserve(t.values.size());
  const double offset = static_cast<double>(quant.offset());
  const double top = static_cast<double>(quant.max_value());
  for (double v : t.values) {
    if (!std::isfinite(v)) throw ValidationError("non-finite tensor value");
    const double q = std::clamp(std::round(v / quant.scale) + offset, 0.0, top);
    out.values.push_back(static_cast<std::uint64_t>(q));
  }
  return out;
}

RealTensor dequantize(const TensorPlain& t) {
  RealTensor out;
  out.shape = t.shape;
  out.values.reserve(t.values.size());
  const double shift = static_cast<double>(t.fan_in) *
                       static_cast<double>(t.quant.offset());
  for (std::uint64_t q : t.values) {
    out.values.push_back((static_cast<double>(q) - shift) * t.quant.scale);
  }
  return out;
}

TensorCipher encrypt_tensor(const RadixCache& cache, const TensorPlain& t,
                            RandomSource& rng, const EncryptOptions& opts) {
  check_layout(t.shape, t.values.size());
  if (t.quant.bit_width > cache.bit_width()) {
    throw CapacityError("tensor bit width " + std::to_string(t.quant.bit_width) +
                        " exceeds cache bit width " +
                        std::to_string(cache.bit_width()));
  }
  const std::uint64_t limit = t.quant.max_value();
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    if (t.values[i] > limit) {
      throw ElementError(i, "plaintext exceeds 2^B - 1");
    }
  }

  TensorCipher out;
  out.shape = t.shape;
  out.quant = t.quant;
  out.cache_fingerprint = cache.fingerprint();
  out.ciphertexts.resize(t.values.size());

  const RandomSource base = rng.fork();
  const std::size_t chunks = (t.values.size() + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;

  auto work = [&] {
    AssemblyStats local;
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) break;
      RandomSource chunk_rng = base.split(c);
      const std::size_t end = std::min(t.values.size(), (c + 1) * kChunk);
      try {
        for (std::size_t i = c * kChunk; i < end; ++i) {
          out.ciphertexts[i] = cached_encrypt(cache, t.values[i], chunk_rng, &local);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
    if (opts.stats != nullptr) {
      std::lock_guard lock(mu);
      *opts.stats += local;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(
      opts.workers, static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

TensorCipher encrypt_tensor_direct(const AdditiveScheme& scheme,
                                   const TensorPlain& t, RandomSource& rng) {
  check_layout(t.shape, t.values.size());
  TensorCipher out;
  out.shape = t.shape;
  out.quant = t.quant;
  out.ciphertexts.reserve(t.values.size());
  BigInt m;
  for (std::uint64_t v : t.values) {
    mpz_import(m.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    out.ciphertexts.push_back(scheme.encrypt(m, rng));
  }
  return out;
}

TensorPlain decrypt_tensor(const Decryptor& decryptor, const TensorCipher& tc) {
  check_layout(tc.shape, tc.ciphertexts.size());
  TensorPlain out;
  out.shape = tc.shape;
  out.quant = tc.quant;
  out.fan_in = tc.fan_in;
  out.values.reserve(tc.ciphertexts.size());
  for (std::size_t i = 0; i < tc.ciphertexts.size(); ++i) {
    try {
      out.values.push_back(to_u64(decryptor.decrypt(tc.ciphertexts[i])));
    } catch (const Error& e) {
      throw ElementError(i, e.what());
    }
  }
  return out;
}

TensorCipher add_tensors(const AdditiveScheme& scheme, const TensorCipher& a,
                         const TensorCipher& b) {
  if (a.shape != b.shape || a.ciphertexts.size() != b.ciphertexts.size()) {
    throw ValidationError("tensor shapes differ");
  }
  if (a.quant.bit_width != b.quant.bit_width || a.quant.mode != b.quant.mode ||
      a.quant.scale != b.quant.scale) {
    throw ValidationError("tensor quantization parameters differ");
  }
  TensorCipher out = a;
  out.fan_in = a.fan_in + b.fan_in;
  if (a.cache_fingerprint != b.cache_fingerprint) out.cache_fingerprint.clear();
  for (std::size_t i = 0; i < out.ciphertexts.size(); ++i) {
    try {
      scheme.add_inplace(out.ciphertexts[i], b.ciphertexts[i]);
    } catch (const ContextError&) {
      throw;
    } catch (const Error& e) {
      throw ElementError(i, e.what());
    }
  }
  return out;
}

}  // namespace chem
