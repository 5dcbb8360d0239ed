// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crowdshare/range_coder.hpp"

namespace crowdshare::entropy {

constexpr std::size_t kWindowSize = 32768;
constexpr std::size_t kMinMatch = 3;
constexpr std::size_t kMaxMatch = 258;

struct Token {
  bool is_match = false;
  std::uint8_t literal = 0;
  std::uint16_t length = 0;    // kMinMatch..kMaxMatch
  std::uint16_t distance = 0;  // 1..kWindowSize

  friend bool operator==(const Token&, const Token&) = default;
};

/// Greedy LZ77 parse with hash chains (32 KiB window, matches 3..258).
std::vector<Token> lz77_tokenize(std::span<const std::uint8_t> input);

/// Replays tokens; throws EntropyError on a distance reaching before the
/// start of the output.
std::vector<std::uint8_t> lz77_expand(std::span<const Token> tokens);

/// LZ77 followed by adaptive range coding.
///
/// Stream layout: u32 little-endian raw length, then the range-coded token
/// stream. Token symbols and their models:
///   flag      2 symbols, context = previous token kind
///   literal   256 symbols, context = top 3 bits of the previous output byte
///   length    256 symbols (length - 3)
///   distance  high 7 bits (128 symbols) then low 8 bits (256 symbols)
std::vector<std::uint8_t> entropy_encode(std::span<const std::uint8_t> input);

/// Inverse of entropy_encode. Throws EntropyError when the stream is
/// inconsistent with its length prefix.
std::vector<std::uint8_t> entropy_decode(std::span<const std::uint8_t> encoded);

}  // namespace crowdshare::entropy
