// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace crowdshare::entropy {

class EntropyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive frequency table over `symbols` symbols backed by a Fenwick tree.
///
/// Every count starts at 1. Each coded symbol adds `kIncrement`; when the
/// total would pass `kLimit` (2^16) all counts are halved (rounding up, so
/// no count reaches zero).
class FrequencyModel {
 public:
  static constexpr std::uint32_t kIncrement = 24;
  static constexpr std::uint32_t kLimit = 1u << 16;

  explicit FrequencyModel(int symbols);

  int symbols() const noexcept { return static_cast<int>(freq_.size()); }
  std::uint32_t total() const noexcept { return total_; }
  std::uint32_t frequency(int symbol) const noexcept { return freq_[static_cast<std::size_t>(symbol)]; }

  /// Sum of counts of symbols strictly below `symbol`.
  std::uint32_t cumulative(int symbol) const noexcept;

  /// Symbol s with cumulative(s) <= target < cumulative(s) + frequency(s).
  int find(std::uint32_t target) const noexcept;

  void update(int symbol);

 private:
  void rebuild();

  std::vector<std::uint32_t> freq_;
  std::vector<std::uint32_t> tree_;  // 1-based Fenwick tree
  std::uint32_t total_ = 0;
  int top_bit_ = 1;
};

/// Carry-propagating range encoder: 32-bit range, 33-bit low (kept in a
/// 64-bit register), one cached output byte plus a run of pending 0xFF
/// bytes. Renormalizes whenever range drops below 2^24.
class RangeEncoder {
 public:
  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total);
  void encode(FrequencyModel& model, int symbol);

  /// Flushes the low register; the encoder must not be used afterwards.
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> bytes);

  int decode(FrequencyModel& model);

  /// Bytes pulled from the input so far, including reads past the end.
  std::size_t consumed() const noexcept { return pos_; }
  bool overran() const noexcept { return pos_ > bytes_.size(); }

 private:
  std::uint8_t next() noexcept;

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

}  // namespace crowdshare::entropy
