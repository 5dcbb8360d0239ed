// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/entropy.hpp"

#include <array>
#include <limits>
#include <memory>

namespace crowdshare::entropy {

namespace {

constexpr std::size_t kHashBits = 15;
constexpr std::size_t kHashSize = std::size_t{1} << kHashBits;
constexpr std::size_t kWindowMask = kWindowSize - 1;
constexpr int kMaxChain = 64;
constexpr std::uint32_t kNoPosition = std::numeric_limits<std::uint32_t>::max();

std::size_t hash3(const std::uint8_t* p) noexcept {
  const std::uint32_t v = (std::uint32_t{p[0]} << 16) | (std::uint32_t{p[1]} << 8) | p[2];
  return (v * 2654435761u) >> (32 - kHashBits);
}

// Literal context is the top 3 bits of the previous byte. A full order-1
// context (256 tables) learns too slowly on 64 KiB inputs.
constexpr int kLiteralContextShift = 5;
constexpr std::size_t kLiteralContexts = 256 >> kLiteralContextShift;

// Per-stream model set; never shared between calls.
struct TokenModels {
  std::array<FrequencyModel, 2> flag{FrequencyModel(2), FrequencyModel(2)};
  std::vector<FrequencyModel> literal = std::vector<FrequencyModel>(kLiteralContexts, FrequencyModel(256));
  FrequencyModel length{256};
  FrequencyModel distance_high{128};
  FrequencyModel distance_low{256};
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::vector<Token> lz77_tokenize(std::span<const std::uint8_t> input) {
  std::vector<Token> tokens;
  const std::size_t n = input.size();
  std::vector<std::uint32_t> head(kHashSize, kNoPosition);
  std::vector<std::uint32_t> prev(kWindowSize, kNoPosition);

  auto insert = [&](std::size_t pos) {
    if (pos + kMinMatch > n) return;
    const std::size_t h = hash3(&input[pos]);
    prev[pos & kWindowMask] = head[h];
    head[h] = static_cast<std::uint32_t>(pos);
  };

  std::size_t pos = 0;
  while (pos < n) {
    std::size_t best_len = 0;
    std::size_t best_dist = 0;
    if (pos + kMinMatch <= n) {
      const std::size_t limit = std::min(kMaxMatch, n - pos);
      std::uint32_t cand = head[hash3(&input[pos])];
      for (int chain = 0; chain < kMaxChain && cand != kNoPosition; ++chain) {
        const std::size_t dist = pos - cand;
        if (dist == 0 || dist > kWindowSize) break;
        std::size_t len = 0;
        while (len < limit && input[cand + len] == input[pos + len]) ++len;
        if (len > best_len) {
          best_len = len;
          best_dist = dist;
          if (len == limit) break;
        }
        const std::uint32_t next = prev[cand & kWindowMask];
        if (next == kNoPosition || next >= cand) break;
        cand = next;
      }
    }

    if (best_len >= kMinMatch) {
      tokens.push_back({true, 0, static_cast<std::uint16_t>(best_len),
                        static_cast<std::uint16_t>(best_dist)});
      for (std::size_t i = 0; i < best_len; ++i) insert(pos + i);
      pos += best_len;
    } else {
      tokens.push_back({false, input[pos], 0, 0});
      insert(pos);
      ++pos;
    }
  }
  return tokens;
}

std::vector<std::uint8_t> lz77_expand(std::span<const Token> tokens) {
  std::vector<std::uint8_t> out;
  for (const auto& t : tokens) {
    if (!t.is_match) {
      out.push_back(t.literal);
      continue;
    }
    if (t.distance == 0 || t.distance > out.size()) {
      throw EntropyError("LZ77 match reaches before the start of the output");
    }
    const std::size_t from = out.size() - t.distance;
    for (std::size_t i = 0; i < t.length; ++i) out.push_back(out[from + i]);
  }
  return out;
}

std::vector<std::uint8_t> entropy_encode(std::span<const std::uint8_t> input) {
  if (input.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("entropy_encode input exceeds 4 GiB");
  }
  const auto tokens = lz77_tokenize(input);
  auto models = std::make_unique<TokenModels>();
  RangeEncoder enc;

  int prev_kind = 0;
  std::uint8_t prev_byte = 0;
  std::size_t produced = 0;
  for (const auto& t : tokens) {
    enc.encode(models->flag[static_cast<std::size_t>(prev_kind)], t.is_match ? 1 : 0);
    if (t.is_match) {
      const int d = t.distance - 1;
      enc.encode(models->length, t.length - static_cast<int>(kMinMatch));
      enc.encode(models->distance_high, d >> 8);
      enc.encode(models->distance_low, d & 0xFF);
      produced += t.length;
    } else {
      enc.encode(models->literal[prev_byte >> kLiteralContextShift], t.literal);
      ++produced;
    }
    prev_byte = input[produced - 1];
    prev_kind = t.is_match ? 1 : 0;
  }

  std::vector<std::uint8_t> out;
  put_u32(out, static_cast<std::uint32_t>(input.size()));
  const auto body = enc.finish();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<std::uint8_t> entropy_decode(std::span<const std::uint8_t> encoded) {
  if (encoded.size() < 4) throw EntropyError("entropy stream shorter than its length prefix");
  std::uint32_t length = 0;
  for (int i = 0; i < 4; ++i) length |= std::uint32_t{encoded[static_cast<std::size_t>(i)]} << (8 * i);

  const auto body = encoded.subspan(4);
  // Each coded symbol emits at most 258 bytes and costs at least a few
  // bits, so a length far beyond the body is corrupt.
  if (static_cast<std::uint64_t>(length) > (static_cast<std::uint64_t>(body.size()) + 1) * 8 * kMaxMatch) {
    throw EntropyError("entropy length prefix inconsistent with stream size");
  }

  auto models = std::make_unique<TokenModels>();
  RangeDecoder dec(body);
  std::vector<std::uint8_t> out;
  out.reserve(length);

  int prev_kind = 0;
  std::uint8_t prev_byte = 0;
  while (out.size() < length) {
    if (dec.overran()) throw EntropyError("entropy stream truncated");
    const int kind = dec.decode(models->flag[static_cast<std::size_t>(prev_kind)]);
    if (kind == 1) {
      const std::size_t len = static_cast<std::size_t>(dec.decode(models->length)) + kMinMatch;
      const int hi = dec.decode(models->distance_high);
      const int lo = dec.decode(models->distance_low);
      const std::size_t dist = static_cast<std::size_t>((hi << 8) | lo) + 1;
      if (dist > out.size() || out.size() + len > length) {
        throw EntropyError("entropy stream does not match its length prefix");
      }
      const std::size_t from = out.size() - dist;
      for (std::size_t i = 0; i < len; ++i) out.push_back(out[from + i]);
    } else {
      out.push_back(static_cast<std::uint8_t>(dec.decode(models->literal[prev_byte >> kLiteralContextShift])));
    }
    prev_byte = out.back();
    prev_kind = kind;
  }
  if (dec.consumed() != body.size()) {
    throw EntropyError("entropy stream length does not match its length prefix");
  }
  return out;
}

}  // namespace crowdshare::entropy
