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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "chem/bench.hpp"
#include "chem/errors.hpp"

namespace chem {
namespace {

std::uint64_t digit_sum_oracle(std::uint64_t x, unsigned r) {
  std::uint64_t s = 0;
  for (; x > 0; x /= r) s += x % r;
  return s;
}

TEST(QuantizeTest, ZeroMapsToOffset) {
  const RealTensor t{{1}, {0.0}};
  EXPECT_EQ(quantize(t, QuantParams::weights()).values[0], 32768u);
  EXPECT_EQ(quantize(t, QuantParams::pixels()).values[0], 0u);
  EXPECT_EQ(quantize(RealTensor{{1}, {1.0}}, QuantParams::weights()).values[0], 33024u);
}

TEST(QuantizeTest, RoundtripWithinHalfStep) {
  RandomSource rng(5);
  const QuantParams q = QuantParams::weights();
  const double lo = -32768 * q.scale;
  const double hi = 32767 * q.scale;
  RealTensor t{{10000}, {}};
  for (int i = 0; i < 10000; ++i) {
    const double u = static_cast<double>(rng() >> 11) / 9007199254740992.0;
    t.values.push_back(lo + u * (hi - lo));
  }
  const RealTensor back = dequantize(quantize(t, q));
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    ASSERT_LE(std::abs(back.values[i] - t.values[i]), q.scale / 2 + 1e-12);
  }
}

TEST(QuantizeTest, LatticePointsAreExact) {
  const QuantParams q = QuantParams::weights();
  RealTensor t{{0}, {}};
  for (long j = -32768; j <= 32767; j += 97) t.values.push_back(j * q.scale);
  t.shape = {t.values.size()};
  EXPECT_EQ(dequantize(quantize(t, q)).values, t.values);
}

TEST(QuantizeTest, ClampsAtBoundaries) {
  const RealTensor t{{4}, {-1e9, 1e9, 255.0, 256.0}};
  const TensorPlain p = quantize(t, QuantParams::pixels());
  EXPECT_EQ(p.values, (std::vector<std::uint64_t>{0, 255, 255, 255}));
  const TensorPlain w = quantize(t, QuantParams::weights());
  EXPECT_EQ(w.values[0], 0u);
  EXPECT_EQ(w.values[1], 65535u);
}

TEST(QuantizeTest, RejectsBadInput) {
  const QuantParams q = QuantParams::weights();
  EXPECT_THROW(quantize(RealTensor{{1}, {std::nan("")}}, q), ValidationError);
  EXPECT_THROW(quantize(RealTensor{{1}, {std::numeric_limits<double>::infinity()}}, q),
               ValidationError);
  EXPECT_THROW(quantize(RealTensor{{3}, {1.0, 2.0}}, q), ValidationError);
  EXPECT_THROW(quantize(RealTensor{{1}, {1.0}}, QuantParams{0.0, 8}), ValidationError);
  EXPECT_THROW(quantize(RealTensor{{1}, {1.0}}, QuantParams{1.0, 54}), ValidationError);
}

TEST(DequantizeTest, SubtractsFanInTimesOffset) {
  TensorPlain p;
  p.shape = {1};
  p.quant = QuantParams::weights();
  p.fan_in = 3;
  p.values = {3 * 32768 + 256};
  EXPECT_DOUBLE_EQ(dequantize(p).values[0], 1.0);
}

class EncryptTensorTest : public ::testing::Test {
 protected:
  RandomSource rng{900};
  SchemeBundle b = make_scheme(SchemeKind::debug, 40, rng);
  RadixCache cache = build_cache(b.scheme, {2, 8, 16, 1, 1}, rng);
};

TEST_F(EncryptTensorTest, MnistShapeRoundtrip) {
  WorkloadSpec spec = WorkloadSpec::mnist();
  const TensorPlain t = synth_tensor(spec, rng);
  ASSERT_EQ(t.values.size(), 784u);
  const TensorCipher c = encrypt_tensor(cache, t, rng);
  EXPECT_EQ(c.ciphertexts.size(), 784u);
  EXPECT_EQ(c.cache_fingerprint, cache.fingerprint());
  EXPECT_EQ(decrypt_tensor(*b.decryptor, c), t);
}

TEST_F(EncryptTensorTest, AllZeroTensor) {
  TensorPlain t;
  t.shape = {28, 28};
  t.values.assign(784, 0);
  t.quant = QuantParams::pixels();
  AssemblyStats stats;
  const TensorCipher c = encrypt_tensor(cache, t, rng, {1, &stats});
  EXPECT_EQ(decrypt_tensor(*b.decryptor, c), t);
  EXPECT_EQ(stats.digit_additions, 0u);
  EXPECT_EQ(stats.encryptions, 784u);
}

TEST_F(EncryptTensorTest, DigitCountersMatchOracleOnSparseWorkload) {
  const TensorPlain t = synth_tensor(WorkloadSpec::mnist(), rng);
  std::uint64_t expected = 0;
  for (std::uint64_t v : t.values) {
    if (v > 0) expected += digit_sum_oracle(v, 2) - 1;
  }
  AssemblyStats stats;
  encrypt_tensor(cache, t, rng, {1, &stats});
  EXPECT_EQ(stats.digit_additions, expected);
}

TEST_F(EncryptTensorTest, DigitWorkGrowsWithDensity) {
  std::uint64_t previous = 0;
  for (double rate : {0.05, 0.179, 0.5, 0.9873}) {
    WorkloadSpec spec = WorkloadSpec::mnist();
    spec.nonempty_rate = rate;
    AssemblyStats stats;
    encrypt_tensor(cache, synth_tensor(spec, rng), rng, {1, &stats});
    EXPECT_GT(stats.digit_additions, previous) << "rate=" << rate;
    previous = stats.digit_additions;
  }
}

TEST_F(EncryptTensorTest, OutputIndependentOfWorkerCount) {
  const TensorPlain t = synth_tensor(WorkloadSpec::mnist(), rng);
  RandomSource r1 = rng;
  RandomSource r4 = rng;
  const TensorCipher a = encrypt_tensor(cache, t, r1, {1, nullptr});
  const TensorCipher c = encrypt_tensor(cache, t, r4, {4, nullptr});
  EXPECT_EQ(a.ciphertexts, c.ciphertexts);
}

TEST_F(EncryptTensorTest, EmptyTensor) {
  TensorPlain t;
  t.shape = {0, 5};
  t.quant = QuantParams::pixels();
  const TensorCipher c = encrypt_tensor(cache, t, rng);
  EXPECT_TRUE(c.ciphertexts.empty());
  EXPECT_TRUE(decrypt_tensor(*b.decryptor, c).values.empty());
}

TEST_F(EncryptTensorTest, ThreeClientAggregate) {
  const RadixCache wide = build_cache(b.scheme, {2, 16, 16, 1, 3}, rng);
  const QuantParams q = QuantParams::weights();
  const std::vector<RealTensor> clients = {
      {{3}, {0.5, -1.0, 2.0}}, {{3}, {0.25, 0.0, -3.0}}, {{3}, {-0.5, 1.0, 0.75}}};
  TensorCipher sum = encrypt_tensor(wide, quantize(clients[0], q), rng);
  for (std::size_t i = 1; i < clients.size(); ++i) {
    sum = add_tensors(*b.scheme, sum, encrypt_tensor(wide, quantize(clients[i], q), rng));
  }
  EXPECT_EQ(sum.fan_in, 3u);
  const TensorPlain plain = decrypt_tensor(*b.decryptor, sum);
  EXPECT_EQ(plain.fan_in, 3u);
  const RealTensor agg = dequantize(plain);
  EXPECT_DOUBLE_EQ(agg.values[0], 0.25);
  EXPECT_DOUBLE_EQ(agg.values[1], 0.0);
  EXPECT_DOUBLE_EQ(agg.values[2], -0.25);
}

TEST_F(EncryptTensorTest, DirectAndCachedDecryptAlike) {
  const TensorPlain t = synth_tensor(WorkloadSpec::mnist(), rng);
  EXPECT_EQ(decrypt_tensor(*b.decryptor, encrypt_tensor_direct(*b.scheme, t, rng)), t);
}

TEST_F(EncryptTensorTest, BitWidthMismatchIsCapacityError) {
  TensorPlain t;
  t.shape = {1};
  t.values = {1};
  t.quant = QuantParams::weights();
  EXPECT_THROW(encrypt_tensor(cache, t, rng), CapacityError);
}

TEST_F(EncryptTensorTest, OversizedElementNamesIndex) {
  TensorPlain t;
  t.shape = {4};
  t.values = {1, 2, 256, 3};
  t.quant = QuantParams::pixels();
  try {
    encrypt_tensor(cache, t, rng);
    FAIL() << "expected ElementError";
  } catch (const ElementError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST_F(EncryptTensorTest, DecryptFailureNamesIndex) {
  TensorPlain t;
  t.shape = {3};
  t.values = {1, 2, 3};
  t.quant = QuantParams::pixels();
  TensorCipher c = encrypt_tensor(cache, t, rng);
  c.ciphertexts[1].parts.clear();
  try {
    decrypt_tensor(*b.decryptor, c);
    FAIL() << "expected ElementError";
  } catch (const ElementError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

}  // namespace
}  // namespace chem
