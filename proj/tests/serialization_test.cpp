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

#include <sstream>

#include <gtest/gtest.h>

#include "chem/errors.hpp"

namespace chem {
namespace {

TEST(SerializationTest, HexRoundtrip) {
  EXPECT_EQ(to_hex64(0xabcdef), "0000000000abcdef");
  EXPECT_EQ(from_hex64("0000000000abcdef"), 0xabcdefu);
  EXPECT_THROW(from_hex64("xyz"), ValidationError);
  EXPECT_THROW(from_hex64(""), ValidationError);
}

TEST(SerializationTest, PaillierBundleRoundtrip) {
  RandomSource rng(3);
  const SchemeBundle b = make_scheme(SchemeKind::paillier, 256, rng);
  const SchemeBundle back = bundle_from_json(json::parse(bundle_to_json(b).dump()));
  EXPECT_EQ(back.scheme->context(), b.scheme->context());
  const Ciphertext c = b.scheme->encrypt(424242, rng);
  EXPECT_EQ(back.decryptor->decrypt(c), 424242);

  const auto pub = scheme_from_json(scheme_to_json(*b.scheme));
  EXPECT_EQ(pub->context(), b.scheme->context());
  EXPECT_EQ(pub->plaintext_modulus(), b.scheme->plaintext_modulus());
}

TEST(SerializationTest, DebugBundleRoundtrip) {
  RandomSource rng(4);
  const SchemeBundle b = make_scheme(SchemeKind::debug, 32, rng);
  const SchemeBundle back = bundle_from_json(bundle_to_json(b));
  EXPECT_EQ(back.scheme->context(), b.scheme->context());
  EXPECT_EQ(back.decryptor->decrypt(b.scheme->encrypt(77, rng)), 77);
}

TEST(SerializationTest, TamperedKeyPairIsRejected) {
  RandomSource rng(5);
  const auto kp = paillier_keygen(128, rng);
  json j = paillier_keypair_to_json(kp);
  j["p"] = "7";
  EXPECT_THROW(paillier_keypair_from_json(j), Error);
}

TEST(SerializationTest, CacheRoundtripPreservesFingerprint) {
  RandomSource rng(6);
  const SchemeBundle b = make_scheme(SchemeKind::paillier, 256, rng);
  const RadixCache cache = build_cache(b.scheme, {3, 12, 8, 2, 4}, rng);
  const json j = json::parse(cache_to_json(cache).dump());
  EXPECT_EQ(j.at("format"), "chem-cache");
  EXPECT_EQ(j.at("version"), 1);
  const RadixCache back = cache_from_json(j);
  EXPECT_EQ(back.fingerprint(), cache.fingerprint());
  EXPECT_EQ(back.params().max_fan_in, 4u);
  EXPECT_EQ(back.params().min_zero_inclusions, 2u);
  EXPECT_EQ(b.decryptor->decrypt(cached_encrypt(back, std::uint64_t{4000}, rng)), 4000);
}

TEST(SerializationTest, CacheTamperingIsDetected) {
  RandomSource rng(7);
  const SchemeBundle b = make_scheme(SchemeKind::paillier, 128, rng);
  const RadixCache cache = build_cache(b.scheme, {2, 8, 4, 1, 1}, rng);
  json j = cache_to_json(cache);
  j["zero_ctxts"][0] = j["zero_ctxts"][1];
  EXPECT_THROW(cache_from_json(j), ValidationError);

  json wrong = cache_to_json(cache);
  wrong["format"] = "chem-tensor-plain";
  EXPECT_THROW(cache_from_json(wrong), ValidationError);
  wrong = cache_to_json(cache);
  wrong["version"] = 2;
  EXPECT_THROW(cache_from_json(wrong), ValidationError);
  wrong = cache_to_json(cache);
  wrong["radix_ctxts"].erase(0);
  EXPECT_THROW(cache_from_json(wrong), Error);
}

TEST(SerializationTest, TensorRoundtrip) {
  RandomSource rng(8);
  const SchemeBundle b = make_scheme(SchemeKind::debug, 40, rng);
  const RadixCache cache = build_cache(b.scheme, {2, 16, 8, 1, 1}, rng);
  const TensorPlain t =
      quantize(RealTensor{{2, 2}, {0.5, -0.25, 3.0, 0.0}}, QuantParams::weights());
  EXPECT_EQ(tensor_plain_from_json(tensor_plain_to_json(t)), t);

  const TensorCipher c = encrypt_tensor(cache, t, rng);
  const TensorCipher back = tensor_cipher_from_json(json::parse(tensor_cipher_to_json(c).dump()));
  EXPECT_EQ(back.ciphertexts, c.ciphertexts);
  EXPECT_EQ(back.cache_fingerprint, cache.fingerprint());
  EXPECT_EQ(decrypt_tensor(*b.decryptor, back), t);
}

TEST(SerializationTest, FlatCsv) {
  std::istringstream in("# header\n1, 2;3\n4\t5 6\n\n");
  const RealTensor t = read_flat_csv(in, std::vector<std::size_t>{2, 3});
  EXPECT_EQ(t.values, (std::vector<double>{1, 2, 3, 4, 5, 6}));
  std::istringstream bad("1,x\n");
  EXPECT_THROW(read_flat_csv(bad), ValidationError);
  std::istringstream short_in("1,2\n");
  EXPECT_THROW(read_flat_csv(short_in, std::vector<std::size_t>{3}), ValidationError);

  std::istringstream flat("7 8 9");
  EXPECT_EQ(read_flat_csv(flat).shape, (std::vector<std::size_t>{3}));

  const TensorPlain p = quantize(RealTensor{{3}, {1, 2, 3}}, QuantParams::pixels());
  std::ostringstream out;
  write_flat_csv(out, p);
  std::istringstream again(out.str());
  EXPECT_EQ(read_flat_csv(again).values, (std::vector<double>{1, 2, 3}));
}

TEST(SerializationTest, CiphertextFromJsonRejectsJunk) {
  EXPECT_THROW(ciphertext_from_json(json(5), 0), MalformedCiphertextError);
  EXPECT_THROW(ciphertext_from_json(json("12a"), 0), ValidationError);
}

}  // namespace
}  // namespace chem
