// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/range_coder.hpp"

#include <algorithm>

namespace crowdshare::entropy {

namespace {
constexpr std::uint32_t kTop = 1u << 24;
}  // namespace

FrequencyModel::FrequencyModel(int symbols) {
  if (symbols < 2 || static_cast<std::uint32_t>(symbols) > kLimit / 2) {
    throw std::invalid_argument("frequency model needs between 2 and 32768 symbols");
  }
  freq_.assign(static_cast<std::size_t>(symbols), 1);
  while (top_bit_ * 2 <= symbols) top_bit_ *= 2;
  rebuild();
}

void FrequencyModel::rebuild() {
  const std::size_t n = freq_.size();
  tree_.assign(n + 1, 0);
  total_ = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    tree_[i] += freq_[i - 1];
    total_ += freq_[i - 1];
    const std::size_t parent = i + (i & (~i + 1));
    if (parent <= n) tree_[parent] += tree_[i];
  }
}

std::uint32_t FrequencyModel::cumulative(int symbol) const noexcept {
  std::uint32_t sum = 0;
  for (std::size_t i = static_cast<std::size_t>(symbol); i > 0; i &= i - 1) sum += tree_[i];
  return sum;
}

int FrequencyModel::find(std::uint32_t target) const noexcept {
  // Fenwick descent: largest prefix whose sum stays <= target.
  std::size_t pos = 0;
  const std::size_t n = freq_.size();
  for (std::size_t step = static_cast<std::size_t>(top_bit_); step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next <= n && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return static_cast<int>(pos);
}

void FrequencyModel::update(int symbol) {
  if (total_ + kIncrement > kLimit) {
    for (auto& f : freq_) f = (f + 1) / 2;
    rebuild();
  }
  freq_[static_cast<std::size_t>(symbol)] += kIncrement;
  total_ += kIncrement;
  for (std::size_t i = static_cast<std::size_t>(symbol) + 1; i < tree_.size(); i += i & (~i + 1)) {
    tree_[i] += kIncrement;
  }
}

void RangeEncoder::encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
  const std::uint32_t r = range_ / total;
  low_ += static_cast<std::uint64_t>(r) * cum;
  range_ = r * freq;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::encode(FrequencyModel& model, int symbol) {
  encode(model.cumulative(symbol), model.frequency(symbol), model.total());
  model.update(symbol);
}

void RangeEncoder::shift_low() {
  // A byte can be emitted once no future carry can reach it: either low
  // is clear of the 0xFF.. zone or a carry has already happened.
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t pending = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>((low_ >> 24) & 0xFF);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
  for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next();
}

std::uint8_t RangeDecoder::next() noexcept {
  const std::uint8_t b = pos_ < bytes_.size() ? bytes_[pos_] : 0;
  ++pos_;
  return b;
}

int RangeDecoder::decode(FrequencyModel& model) {
  const std::uint32_t total = model.total();
  const std::uint32_t r = range_ / total;
  const std::uint32_t target = std::min(code_ / r, total - 1);
  const int symbol = model.find(target);
  const std::uint32_t cum = model.cumulative(symbol);
  code_ -= r * cum;
  range_ = r * model.frequency(symbol);
  while (range_ < kTop) {
    code_ = (code_ << 8) | next();
    range_ <<= 8;
  }
  model.update(symbol);
  return symbol;
}

}  // namespace crowdshare::entropy
