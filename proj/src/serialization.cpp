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

#include "chem/serialization.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "chem/debug_scheme.hpp"
#include "chem/errors.hpp"

namespace chem {
namespace {

std::string dec(const BigInt& v) { return v.get_str(10); }

BigInt big(const json& j) {
  if (!j.is_string()) throw ValidationError("expected decimal string");
  BigInt out;
  if (out.set_str(j.get<std::string>(), 10) != 0) {
    throw ValidationError("malformed decimal integer");
  }
  return out;
}

void expect_format(const json& j, const char* format) {
  if (!j.is_object() || j.value("format", "") != format) {
    throw ValidationError(std::string("expected a ") + format + " document");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw ValidationError(std::string("unsupported ") + format + " version");
  }
}

const char* mode_name(QuantMode m) {
  return m == QuantMode::signed_offset ? "signed-offset" : "unsigned";
}

QuantMode mode_from(const std::string& s) {
  if (s == "signed-offset") return QuantMode::signed_offset;
  if (s == "unsigned") return QuantMode::unsigned_int;
  throw ValidationError("unknown quantization mode '" + s + "'");
}

json quant_to_json(const QuantParams& q) {
  return {{"scale", q.scale}, {"bit_width", q.bit_width}, {"mode", mode_name(q.mode)}};
}

QuantParams quant_from_json(const json& j) {
  QuantParams q;
  q.scale = j.at("scale").get<double>();
  q.bit_width = j.at("bit_width").get<unsigned>();
  q.mode = mode_from(j.at("mode").get<std::string>());
  q.validate();
  return q;
}

}  // namespace

std::string to_hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t from_hex64(const std::string& s) {
  if (s.empty() || s.size() > 16) throw ValidationError("malformed hex context");
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ValidationError("malformed hex context");
  }
  return v;
}

json ciphertext_to_json(const Ciphertext& c) {
  if (c.parts.size() == 1) return dec(c.parts.front());
  json arr = json::array();
  for (const auto& p : c.parts) arr.push_back(dec(p));
  return arr;
}

Ciphertext ciphertext_from_json(const json& j, std::uint64_t context) {
  Ciphertext c;
  c.context = context;
  if (j.is_string()) {
    c.parts.push_back(big(j));
  } else if (j.is_array()) {
    for (const auto& p : j) c.parts.push_back(big(p));
  } else {
    throw MalformedCiphertextError("ciphertext must be a string or array");
  }
  return c;
}

json scheme_to_json(const AdditiveScheme& scheme) {
  json j = {{"format", "chem-public-key"}, {"version", kFormatVersion},
            {"scheme", std::string(scheme.id())}};
  if (auto* p = dynamic_cast<const PaillierScheme*>(&scheme)) {
    j["n"] = dec(p->public_key().n);
  } else if (auto* d = dynamic_cast<const DebugScheme*>(&scheme)) {
    j["modulus"] = dec(d->key().modulus);
    j["key_id"] = to_hex64(d->key().key_id);
  } else {
    throw ValidationError("scheme has no serialized form");
  }
  j["context"] = to_hex64(scheme.context());
  return j;
}

std::shared_ptr<const AdditiveScheme> scheme_from_json(const json& j) {
  expect_format(j, "chem-public-key");
  const auto kind = parse_scheme_kind(j.at("scheme").get<std::string>());
  std::shared_ptr<const AdditiveScheme> out;
  if (kind == SchemeKind::paillier) {
    out = std::make_shared<PaillierScheme>(PaillierPublicKey::from_modulus(big(j.at("n"))));
  } else {
    DebugKey key{big(j.at("modulus")), from_hex64(j.at("key_id").get<std::string>())};
    out = std::make_shared<DebugScheme>(std::move(key));
  }
  if (j.contains("context") &&
      from_hex64(j["context"].get<std::string>()) != out->context()) {
    throw ContextError("public key does not match its recorded context");
  }
  return out;
}

json paillier_keypair_to_json(const PaillierKeyPair& kp) {
  return {{"format", "chem-keypair"},
          {"version", kFormatVersion},
          {"scheme", "paillier"},
          {"key_bits", kp.key_bits},
          {"n", dec(kp.public_key.n)},
          {"p", dec(kp.secret_key.p)},
          {"q", dec(kp.secret_key.q)}};
}

PaillierKeyPair paillier_keypair_from_json(const json& j) {
  expect_format(j, "chem-keypair");
  auto kp = paillier_keypair_from_primes(big(j.at("p")), big(j.at("q")));
  if (kp.public_key.n != big(j.at("n"))) {
    throw ValidationError("n does not equal p * q");
  }
  return kp;
}

json bundle_to_json(const SchemeBundle& bundle) {
  if (auto* p = dynamic_cast<const PaillierDecryptor*>(bundle.decryptor.get())) {
    return paillier_keypair_to_json(p->key_pair());
  }
  if (auto* d = dynamic_cast<const DebugScheme*>(bundle.scheme.get())) {
    return {{"format", "chem-keypair"},
            {"version", kFormatVersion},
            {"scheme", "debug"},
            {"modulus", dec(d->key().modulus)},
            {"key_id", to_hex64(d->key().key_id)}};
  }
  throw ValidationError("key pair has no serialized form");
}

SchemeBundle bundle_from_json(const json& j) {
  expect_format(j, "chem-keypair");
  const auto kind = parse_scheme_kind(j.at("scheme").get<std::string>());
  if (kind == SchemeKind::paillier) {
    auto kp = paillier_keypair_from_json(j);
    auto scheme = std::make_shared<PaillierScheme>(kp.public_key);
    return {std::move(scheme), std::make_shared<PaillierDecryptor>(std::move(kp))};
  }
  DebugKey key{big(j.at("modulus")), from_hex64(j.at("key_id").get<std::string>())};
  return {std::make_shared<DebugScheme>(key), std::make_shared<DebugDecryptor>(key)};
}

json cache_to_json(const RadixCache& cache) {
  const CacheParams& p = cache.params();
  json radixes = json::array();
  for (const auto& c : cache.radix_ctxts()) radixes.push_back(ciphertext_to_json(c));
  json zeros = json::array();
  for (const auto& c : cache.zero_ctxts()) zeros.push_back(ciphertext_to_json(c));
  return {{"format", "chem-cache"},
          {"version", kFormatVersion},
          {"radix", p.radix},
          {"bit_width", p.bit_width},
          {"zero_count", p.zero_count},
          {"min_zero_inclusions", p.min_zero_inclusions},
          {"max_fan_in", p.max_fan_in},
          {"public_key", scheme_to_json(cache.scheme())},
          {"fingerprint", cache.fingerprint()},
          {"radix_ctxts", std::move(radixes)},
          {"zero_ctxts", std::move(zeros)}};
}

RadixCache cache_from_json(const json& j) {
  expect_format(j, "chem-cache");
  auto scheme = scheme_from_json(j.at("public_key"));
  CacheParams p;
  p.radix = j.at("radix").get<unsigned>();
  p.bit_width = j.at("bit_width").get<unsigned>();
  p.zero_count = j.at("zero_count").get<std::size_t>();
  p.min_zero_inclusions = j.at("min_zero_inclusions").get<std::size_t>();
  p.max_fan_in = j.at("max_fan_in").get<std::uint64_t>();
  std::vector<Ciphertext> radixes;
  for (const auto& c : j.at("radix_ctxts")) {
    radixes.push_back(ciphertext_from_json(c, scheme->context()));
  }
  std::vector<Ciphertext> zeros;
  for (const auto& c : j.at("zero_ctxts")) {
    zeros.push_back(ciphertext_from_json(c, scheme->context()));
  }
  auto cache = RadixCache::from_entries(std::move(scheme), p, std::move(radixes),
                                        std::move(zeros));
  if (j.contains("fingerprint") && j["fingerprint"] != cache.fingerprint()) {
    throw ValidationError("cache contents do not match the recorded fingerprint");
  }
  return cache;
}

json tensor_plain_to_json(const TensorPlain& t) {
  return {{"format", "chem-tensor-plain"},
          {"version", kFormatVersion},
          {"shape", t.shape},
          {"quant", quant_to_json(t.quant)},
          {"fan_in", t.fan_in},
          {"values", t.values}};
}

TensorPlain tensor_plain_from_json(const json& j) {
  expect_format(j, "chem-tensor-plain");
  TensorPlain t;
  t.shape = j.at("shape").get<std::vector<std::size_t>>();
  t.quant = quant_from_json(j.at("quant"));
  t.fan_in = j.value("fan_in", std::uint64_t{1});
  t.values = j.at("values").get<std::vector<std::uint64_t>>();
  if (element_count(t.shape) != t.values.size()) {
    throw ValidationError("value count does not match shape");
  }
  return t;
}

json tensor_cipher_to_json(const TensorCipher& t) {
  json cts = json::array();
  std::uint64_t context = t.ciphertexts.empty() ? 0 : t.ciphertexts.front().context;
  for (const auto& c : t.ciphertexts) {
    if (c.context != context) throw ContextError("mixed contexts in one tensor");
    cts.push_back(ciphertext_to_json(c));
  }
  return {{"format", "chem-tensor-cipher"},
          {"version", kFormatVersion},
          {"shape", t.shape},
          {"quant", quant_to_json(t.quant)},
          {"fan_in", t.fan_in},
          {"cache_fingerprint", t.cache_fingerprint},
          {"context", to_hex64(context)},
          {"ciphertexts", std::move(cts)}};
}

TensorCipher tensor_cipher_from_json(const json& j) {
  expect_format(j, "chem-tensor-cipher");
  TensorCipher t;
  t.shape = j.at("shape").get<std::vector<std::size_t>>();
  t.quant = quant_from_json(j.at("quant"));
  t.fan_in = j.value("fan_in", std::uint64_t{1});
  t.cache_fingerprint = j.value("cache_fingerprint", "");
  const std::uint64_t context = from_hex64(j.at("context").get<std::string>());
  for (const auto& c : j.at("ciphertexts")) {
    t.ciphertexts.push_back(ciphertext_from_json(c, context));
  }
  if (element_count(t.shape) != t.ciphertexts.size()) {
    throw ValidationError("ciphertext count does not match shape");
  }
  return t;
}

RealTensor read_flat_csv(std::istream& in,
                         std::optional<std::vector<std::size_t>> shape) {
  RealTensor t;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw ValidationError("non-numeric CSV field '" + tok + "'");
      }
      if (used != tok.size()) throw ValidationError("non-numeric CSV field '" + tok + "'");
      t.values.push_back(v);
    }
  }
  t.shape = shape ? *shape : std::vector<std::size_t>{t.values.size()};
  if (element_count(t.shape) != t.values.size()) {
    throw ValidationError("CSV value count does not match shape");
  }
  return t;
}

void write_flat_csv(std::ostream& out, const TensorPlain& t) {
  out << "# shape";
  for (std::size_t d : t.shape) out << ' ' << d;
  out << '\n';
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    out << t.values[i] << (i + 1 == t.values.size() ? '\n' : ',');
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace chem
