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
#include <string>
#include <vector>

#include "chem/radix_cache.hpp"
#include "chem/scheme.hpp"

namespace chem {

enum class QuantMode { unsigned_int, signed_offset };

/// Fixed-point mapping between reals and plaintexts in [0, 2^B).
struct QuantParams {
  double scale = 1.0;
  unsigned bit_width = 8;
  QuantMode mode = QuantMode::unsigned_int;

  // 2^(B-1) in signed-offset mode, 0 otherwise.
  std::uint64_t offset() const;
  std::uint64_t max_value() const;

  // Throws ValidationError for scale <= 0 or bit_width outside [1, 53].
  void validate() const;

  // B = 16, scale = 2^-8, signed-offset.
  static QuantParams weights();
  // B = 8, scale = 1, unsigned.
  static QuantParams pixels();
};

// Flattened row-major; `shape` is metadata.
struct RealTensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

/// Quantized plaintext tensor. `fan_in` is 1 for a fresh tensor and k for the
/// decryption of a k-way homomorphic sum, so values stay below fan_in * 2^B.
struct TensorPlain {
  std::vector<std::size_t> shape;
  std::vector<std::uint64_t> values;
  QuantParams quant;
  std::uint64_t fan_in = 1;

  bool operator==(const TensorPlain& o) const {
    return shape == o.shape && values == o.values && fan_in == o.fan_in &&
           quant.bit_width == o.quant.bit_width && quant.mode == o.quant.mode &&
           quant.scale == o.quant.scale;
  }
};

struct TensorCipher {
  std::vector<std::size_t> shape;
  std::vector<Ciphertext> ciphertexts;
  QuantParams quant;
  std::string cache_fingerprint;
  std::uint64_t fan_in = 1;
};

std::size_t element_count(const std::vector<std::size_t>& shape);

// unsigned:      q = clamp(round(v / scale), 0, 2^B - 1)
// signed-offset: q = clamp(round(v / scale) + 2^(B-1), 0, 2^B - 1)
// Throws ValidationError on non-finite input or shape/value mismatch.
TensorPlain quantize(const RealTensor& t, const QuantParams& quant);

// v = (q - fan_in * offset) * scale
RealTensor dequantize(const TensorPlain& t);

struct EncryptOptions {
  unsigned workers = 1;
  AssemblyStats* stats = nullptr;
};

// Element-wise cached encryption. Randomness is split per fixed-size chunk
// from one fork of `rng`, so the output does not depend on the worker count.
// Throws CapacityError when the tensor's bit width exceeds the cache's.
TensorCipher encrypt_tensor(const RadixCache& cache, const TensorPlain& t,
                            RandomSource& rng, const EncryptOptions& opts = {});

// Element-wise primitive encryption; the baseline cached encryption is
// measured against.
TensorCipher encrypt_tensor_direct(const AdditiveScheme& scheme,
                                   const TensorPlain& t, RandomSource& rng);

// Throws ElementError naming the first element that fails to decrypt.
TensorPlain decrypt_tensor(const Decryptor& decryptor, const TensorCipher& tc);

// Element-wise homomorphic sum; shapes, quantization and contexts must match.
TensorCipher add_tensors(const AdditiveScheme& scheme, const TensorCipher& a,
                         const TensorCipher& b);

}  // namespace chem
