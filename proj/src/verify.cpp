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

#include "chem/verify.hpp"

#include <functional>
#include <memory>
#include <set>
#include <sstream>

#include "chem/debug_scheme.hpp"
#include "chem/errors.hpp"
#include "chem/paillier.hpp"
#include "chem/parametrization.hpp"
#include "chem/radix_cache.hpp"

namespace chem {
namespace {

using Suite = std::function<void(std::vector<CheckResult>&, std::uint64_t)>;

void record(std::vector<CheckResult>& out, const char* suite, std::string name,
            bool ok, std::string detail = {}) {
  out.push_back({suite, std::move(name), ok, std::move(detail)});
}

std::string key_of(const Ciphertext& c) {
  std::string s;
  for (const auto& p : c.parts) s += p.get_str(16) + ":";
  return s;
}

// Exhaustive cached-vs-direct agreement over [0, limit) for one radix.
std::size_t oracle_failures(const SchemeBundle& b, unsigned radix, unsigned bits,
                            std::size_t zeros, std::uint64_t limit,
                            RandomSource& rng) {
  const RadixCache cache = build_cache(b.scheme, {radix, bits, zeros, 1, 1}, rng);
  std::size_t bad = 0;
  for (std::uint64_t x = 0; x < limit; ++x) {
    const BigInt via_cache = b.decryptor->decrypt(cached_encrypt(cache, x, rng));
    const BigInt via_direct =
        b.decryptor->decrypt(b.scheme->encrypt(BigInt(std::to_string(x)), rng));
    if (via_cache != via_direct || via_cache != BigInt(std::to_string(x))) ++bad;
  }
  return bad;
}

void roundtrip_suite(std::vector<CheckResult>& out, std::uint64_t seed) {
  RandomSource rng(seed);
  {
    const auto kp = paillier_keypair_from_primes(5, 7);
    std::size_t bad = 0;
    for (unsigned x = 0; x < 35; ++x) {
      if (paillier_decrypt(kp, paillier_encrypt(kp.public_key, x, rng)) != x) ++bad;
    }
    record(out, "roundtrip", "paillier toy key exhaustive [0, 35)", bad == 0,
           std::to_string(bad) + " failures");
  }
  {
    const auto kp = paillier_keygen(512, rng);
    std::size_t bad = 0;
    std::size_t crt_mismatch = 0;
    for (int i = 0; i < 200; ++i) {
      const BigInt x = rng.below(kp.public_key.n);
      const Ciphertext c = paillier_encrypt(kp.public_key, x, rng);
      const BigInt m = paillier_decrypt(kp, c);
      if (m != x) ++bad;
      if (m != paillier_decrypt_reference(kp, c)) ++crt_mismatch;
    }
    record(out, "roundtrip", "paillier 512-bit sampled roundtrip", bad == 0,
           std::to_string(bad) + " failures of 200");
    record(out, "roundtrip", "paillier CRT decryption matches textbook formula",
           crt_mismatch == 0, std::to_string(crt_mismatch) + " mismatches");

    std::size_t hom_bad = 0;
    for (int i = 0; i < 200; ++i) {
      const BigInt a = rng.below(kp.public_key.n);
      const BigInt b = rng.below(kp.public_key.n);
      const BigInt sum = paillier_decrypt(
          kp, paillier_add(kp.public_key, paillier_encrypt(kp.public_key, a, rng),
                           paillier_encrypt(kp.public_key, b, rng)));
      BigInt expect = a + b;
      mpz_mod(expect.get_mpz_t(), expect.get_mpz_t(), kp.public_key.n.get_mpz_t());
      if (sum != expect) ++hom_bad;
    }
    record(out, "roundtrip", "paillier additive homomorphism", hom_bad == 0,
           std::to_string(hom_bad) + " failures of 200");
  }
  {
    const auto key = debug_keygen(16, rng);
    const DebugScheme scheme(key);
    const DebugDecryptor dec(key);
    std::size_t bad = 0;
    for (unsigned x = 0; x < (1u << 12); ++x) {
      if (dec.decrypt(scheme.encrypt(x, rng)) != x) ++bad;
    }
    record(out, "roundtrip", "debug scheme exhaustive [0, 2^12)", bad == 0,
           std::to_string(bad) + " failures");
  }
}

void oracle_suite(std::vector<CheckResult>& out, std::uint64_t seed) {
  RandomSource rng(seed + 1);
  const SchemeBundle debug = make_scheme(SchemeKind::debug, 32, rng);
  for (unsigned r : {2u, 3u, 10u}) {
    const std::size_t bad = oracle_failures(debug, r, 12, 64, 1u << 12, rng);
    record(out, "oracle", "debug cached == direct over [0, 2^12), r=" + std::to_string(r),
           bad == 0, std::to_string(bad) + " failures");
  }
  const SchemeBundle toy = make_scheme(SchemeKind::paillier, 64, rng);
  for (unsigned r : {2u, 3u, 10u}) {
    const std::size_t bad = oracle_failures(toy, r, 8, 16, 1u << 8, rng);
    record(out, "oracle",
           "paillier-64 cached == direct over [0, 2^8), r=" + std::to_string(r),
           bad == 0, std::to_string(bad) + " failures");
  }
  {
    const RadixCache cache = build_cache(toy.scheme, {3, 16, 8, 1, 1}, rng);
    bool ok = true;
    BigInt power = 1;
    for (const auto& c : cache.radix_ctxts()) {
      ok = ok && toy.decryptor->decrypt(c) == power;
      power *= 3;
    }
    for (const auto& c : cache.zero_ctxts()) ok = ok && toy.decryptor->decrypt(c) == 0;
    record(out, "oracle", "cache entries decrypt to r^i and 0", ok);
  }
}

void parametrization_suite(std::vector<CheckResult>& out, std::uint64_t) {
  std::size_t bad = 0;
  std::ostringstream detail;
  for (unsigned r = 2; r <= 16; ++r) {
    std::uint64_t m = r;
    for (unsigned k = 1; k <= 5; ++k) {
      m *= r;  // r^(k+1)
      const std::uint64_t measured = measured_cost(r, m - 1);
      const std::uint64_t closed = (r - 1) * (k + 1) - 1;
      if (measured != closed ||
          static_cast<std::uint64_t>(std::llround(predicted_cost(r, m - 1))) != closed) {
        ++bad;
        detail << " r=" << r << ",k=" << k;
      }
    }
  }
  record(out, "parametrization", "measured worst case equals (r-1)(k+1)-1", bad == 0,
         std::to_string(bad) + " mismatches" + detail.str());

  for (std::uint64_t m : {3ull, 15ull, 255ull, 4095ull, 65535ull}) {
    const unsigned best = optimal_radix(m, {2, 64});
    record(out, "parametrization", "optimal radix is 2 for m=" + std::to_string(m),
           best == 2, "got " + std::to_string(best));
    record(out, "parametrization", "predicted cost monotone in r for m=" + std::to_string(m),
           monotonicity_check(m, 64));
  }
  record(out, "parametrization", "r ln r - r + 1 > 0 for r in [2, 64]", [] {
    for (unsigned r = 2; r <= 64; ++r) {
      if (cost_derivative_sign(r) <= 0) return false;
    }
    return true;
  }());
}

void randomness_suite(std::vector<CheckResult>& out, std::uint64_t seed) {
  RandomSource rng(seed + 2);
  const SchemeBundle b = make_scheme(SchemeKind::paillier, 512, rng);
  {
    const RadixCache cache = build_cache(b.scheme, {2, 16, 128, 1, 1}, rng);
    std::set<std::string> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(key_of(cached_encrypt(cache, 12345, rng)));
    record(out, "randomness", "1000 cached encryptions of one plaintext are distinct",
           seen.size() == 1000, std::to_string(seen.size()) + " distinct");
  }
  {
    const RadixCache cache = build_cache(b.scheme, {2, 8, 64, 1, 1}, rng);
    std::vector<std::size_t> hits(64, 0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const ZeroMask mask = draw_zero_mask(cache, rng);
      for (std::size_t j = 0; j < hits.size(); ++j) hits[j] += mask.included[j];
    }
    double lo = 1.0, hi = 0.0;
    for (std::size_t h : hits) {
      const double f = static_cast<double>(h) / draws;
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    std::ostringstream d;
    d << "frequency range [" << lo << ", " << hi << "]";
    record(out, "randomness", "zero-inclusion frequency within [0.45, 0.55]",
           lo >= 0.45 && hi <= 0.55, d.str());
  }
  {
    const SchemeBundle big = make_scheme(SchemeKind::paillier, 1024, rng);
    std::set<std::string> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(key_of(big.scheme->encrypt(7, rng)));
    record(out, "randomness", "1000 paillier-1024 encryptions of one plaintext are distinct",
           seen.size() == 1000, std::to_string(seen.size()) + " distinct");
  }
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<const CheckResult*> VerifyReport::failures() const {
  std::vector<const CheckResult*> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(&c);
  }
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"suite", c.suite}, {"name", c.name}, {"passed", c.passed},
                   {"detail", c.detail}});
  }
  return {{"passed", passed()}, {"checks", arr}};
}

VerifyReport verify(std::string_view suite, std::uint64_t seed) {
  static const std::vector<std::pair<std::string_view, Suite>> suites = {
      {"roundtrip", roundtrip_suite},
      {"oracle", oracle_suite},
      {"parametrization", parametrization_suite},
      {"randomness", randomness_suite},
  };
  VerifyReport report;
  bool matched = false;
  for (const auto& [name, run] : suites) {
    if (suite == "all" || suite == name) {
      matched = true;
      try {
        run(report.checks, seed);
      } catch (const std::exception& e) {
        report.checks.push_back({std::string(name), "suite raised", false, e.what()});
      }
    }
  }
  if (!matched) {
    throw ConfigError("unknown verify suite '" + std::string(suite) +
                      "' (expected roundtrip, oracle, parametrization, randomness or all)");
  }
  return report;
}

}  // namespace chem
