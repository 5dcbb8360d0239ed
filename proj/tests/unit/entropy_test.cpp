// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "crowdshare/entropy.hpp"
#include "crowdshare/rng.hpp"

namespace crowdshare::entropy {
namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed, int alphabet = 256) {
  Rng rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(alphabet)));
  return v;
}

TEST(FrequencyModel, CumulativeMatchesNaiveSum) {
  FrequencyModel m(37);
  Rng rng(3);
  std::vector<std::uint32_t> naive(37, 1);
  for (int step = 0; step < 5000; ++step) {
    const int s = static_cast<int>(rng.below(37));
    m.update(s);
    std::uint32_t total = 0;
    for (auto c : naive) total += c;
    if (total + FrequencyModel::kIncrement > FrequencyModel::kLimit) {
      for (auto& c : naive) c = (c + 1) / 2;
    }
    naive[static_cast<std::size_t>(s)] += FrequencyModel::kIncrement;
  }
  std::uint32_t cum = 0;
  for (int s = 0; s < 37; ++s) {
    ASSERT_EQ(m.frequency(s), naive[static_cast<std::size_t>(s)]);
    ASSERT_EQ(m.cumulative(s), cum);
    ASSERT_EQ(m.find(cum), s);
    ASSERT_EQ(m.find(cum + m.frequency(s) - 1), s);
    cum += m.frequency(s);
  }
  EXPECT_EQ(m.total(), cum);
  EXPECT_LE(m.total(), FrequencyModel::kLimit);
}

TEST(RangeCoder, RoundTripSymbols) {
  const auto data = random_bytes(20000, 9, 17);
  RangeEncoder enc;
  FrequencyModel em(17);
  for (auto b : data) enc.encode(em, b);
  const auto bytes = enc.finish();
  RangeDecoder dec(bytes);
  FrequencyModel dm(17);
  for (auto b : data) ASSERT_EQ(dec.decode(dm), b);
  EXPECT_FALSE(dec.overran());
  EXPECT_EQ(dec.consumed(), bytes.size());
}

TEST(Lz77, TokensExpandBack) {
  std::vector<std::uint8_t> data;
  for (int i = 0; i < 3000; ++i) data.push_back(static_cast<std::uint8_t>((i * 7) % 23));
  const auto noise = random_bytes(500, 1);
  data.insert(data.end(), noise.begin(), noise.end());
  const auto tokens = lz77_tokenize(data);
  EXPECT_LT(tokens.size(), data.size() / 4);
  for (const auto& t : tokens) {
    if (!t.is_match) continue;
    EXPECT_GE(t.length, kMinMatch);
    EXPECT_LE(t.length, kMaxMatch);
    EXPECT_GE(t.distance, 1);
  }
  EXPECT_EQ(lz77_expand(tokens), data);
}

TEST(Lz77, RejectsDistanceBeforeStart) {
  std::vector<Token> bad{{false, 'a', 0, 0}, {true, 0, 3, 2}};
  EXPECT_THROW(lz77_expand(bad), EntropyError);
}

TEST(Entropy, ZerosCompressHard) {
  const std::vector<std::uint8_t> zeros(10000, 0);
  const auto enc = entropy_encode(zeros);
  EXPECT_LT(enc.size(), 200u);
  EXPECT_EQ(entropy_decode(enc), zeros);
}

TEST(Entropy, EmptyAndTiny) {
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u}) {
    const auto data = random_bytes(n, 100 + n);
    EXPECT_EQ(entropy_decode(entropy_encode(data)), data) << n;
  }
}

TEST(Entropy, RandomRoundTrips) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(rng.below(70000));
    const int alphabet = 1 + static_cast<int>(rng.below(256));
    const auto data = random_bytes(n, seed * 31 + 7, alphabet);
    EXPECT_EQ(entropy_decode(entropy_encode(data)), data) << "seed " << seed;
  }
}

TEST(Entropy, LongRepeatsCrossWindow) {
  auto block = random_bytes(40000, 5);
  std::vector<std::uint8_t> data = block;
  data.insert(data.end(), block.begin(), block.end());
  EXPECT_EQ(entropy_decode(entropy_encode(data)), data);
}

TEST(Entropy, RandomBytesDoNotExpandMuch) {
  const auto data = random_bytes(65536, 11);
  EXPECT_LT(entropy_encode(data).size(), data.size() + data.size() / 20);
}

TEST(Entropy, CorruptStreamsRejected) {
  const auto data = random_bytes(4000, 12, 8);
  const auto enc = entropy_encode(data);
  std::vector<std::uint8_t> truncated(enc.begin(), enc.begin() + static_cast<long>(enc.size() / 2));
  EXPECT_THROW(entropy_decode(truncated), EntropyError);
  EXPECT_THROW(entropy_decode(std::vector<std::uint8_t>{1, 2}), EntropyError);
  auto trailing = enc;
  trailing.insert(trailing.end(), 16, 0xAB);
  EXPECT_THROW(entropy_decode(trailing), EntropyError);
  auto longer = enc;
  longer[0] = static_cast<std::uint8_t>(longer[0] + 100);
  EXPECT_THROW(entropy_decode(longer), EntropyError);
}

}  // namespace
}  // namespace crowdshare::entropy
