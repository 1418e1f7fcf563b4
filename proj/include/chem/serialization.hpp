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

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chem/paillier.hpp"
#include "chem/radix_cache.hpp"
#include "chem/scheme.hpp"
#include "chem/tensor.hpp"

// JSON containers. Every integer that may exceed 64 bits is a decimal
// string; key contexts are 16-digit lowercase hex. Each document carries a
// "format" tag and "version": 1. See README.md for the full layout.
namespace chem {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

json ciphertext_to_json(const Ciphertext& c);
Ciphertext ciphertext_from_json(const json& j, std::uint64_t context);

// {"format":"chem-public-key","scheme":"paillier","n":"..."} or
// {"format":"chem-public-key","scheme":"debug","modulus":"...","key_id":"..."}
json scheme_to_json(const AdditiveScheme& scheme);
std::shared_ptr<const AdditiveScheme> scheme_from_json(const json& j);

// Public key plus secret material ("p","q" for Paillier).
json bundle_to_json(const SchemeBundle& bundle);
SchemeBundle bundle_from_json(const json& j);

json paillier_keypair_to_json(const PaillierKeyPair& kp);
PaillierKeyPair paillier_keypair_from_json(const json& j);

// Radix parameters, embedded public key and both ciphertext lists.
json cache_to_json(const RadixCache& cache);
RadixCache cache_from_json(const json& j);

json tensor_plain_to_json(const TensorPlain& t);
TensorPlain tensor_plain_from_json(const json& j);

json tensor_cipher_to_json(const TensorCipher& t);
TensorCipher tensor_cipher_from_json(const json& j);

// Flat numeric import: values separated by commas, whitespace or newlines;
// lines starting with '#' are skipped. Shape defaults to [count].
RealTensor read_flat_csv(std::istream& in,
                         std::optional<std::vector<std::size_t>> shape = {});
void write_flat_csv(std::ostream& out, const TensorPlain& t);

std::string to_hex64(std::uint64_t v);
std::uint64_t from_hex64(const std::string& s);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace chem
