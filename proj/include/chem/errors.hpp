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
#include <stdexcept>
#include <string>

namespace chem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plaintext or digit outside the admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Parameters that cannot be represented under the scheme's plaintext modulus
// (radix powers, aggregation fan-in, bit width mismatch).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Ciphertexts or caches produced under a different key.
class ContextError : public Error {
 public:
  using Error::Error;
};

class MalformedCiphertextError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class KeyGenerationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Failure attributed to a single tensor element.
class ElementError : public Error {
 public:
  ElementError(std::size_t index, const std::string& what)
      : Error("element " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace chem
