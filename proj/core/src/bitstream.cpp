// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bit>
#include <cstring>

#include "crowdshare/codec.hpp"

namespace crowdshare::codec {

namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void f32(float v) { put(std::bit_cast<std::uint32_t>(v), 4); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void put(std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return get(4); }
  float f32() { return std::bit_cast<float>(get(4)); }
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }

 private:
  std::uint32_t get(int n) {
    if (bytes_.size() - pos_ < static_cast<std::size_t>(n)) {
      throw CodecError("SGWC header truncated");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint32_t{bytes_[pos_ + static_cast<std::size_t>(i)]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_bitstream(const Bitstream& bitstream) {
  const auto& h = bitstream.header;
  const auto expected_bands =
      static_cast<std::size_t>(h.channels) * static_cast<std::size_t>(bands_per_channel(h.levels));
  if (h.bands.size() != expected_bands) {
    throw CodecError("band parameter count does not match channels and levels");
  }
  if (h.boxes.size() > 0xFFFF) throw CodecError("too many boxes for the SGWC header");

  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u8(h.version);
  w.u32(h.width);
  w.u32(h.height);
  w.u32(h.original_width);
  w.u32(h.original_height);
  w.u8(h.levels);
  w.u8(h.channels);
  w.u16(static_cast<std::uint16_t>(h.boxes.size()));
  for (const auto& b : h.boxes) {
    w.u16(b.x);
    w.u16(b.y);
    w.u16(b.w);
    w.u16(b.h);
    w.u8(b.level);
  }
  for (const auto& p : h.bands) {
    w.f32(p.mean);
    w.f32(p.scale);
  }
  w.u32(h.selected_count);
  w.bytes(bitstream.payload);
  return w.take();
}

Bitstream parse_bitstream(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw CodecError("not an SGWC bitstream (bad magic)");
  }
  Reader r(bytes.subspan(4));
  Bitstream bs;
  auto& h = bs.header;
  h.version = r.u8();
  if (h.version != kVersion) {
    throw CodecError("unsupported SGWC version " + std::to_string(h.version));
  }
  h.width = r.u32();
  h.height = r.u32();
  h.original_width = r.u32();
  h.original_height = r.u32();
  h.levels = r.u8();
  h.channels = r.u8();
  if (h.channels != 1 && h.channels != 3) throw CodecError("SGWC channel count must be 1 or 3");
  if (h.levels < 1 || h.levels > 16) throw CodecError("SGWC level count out of range");
  const std::uint16_t box_count = r.u16();
  h.boxes.resize(box_count);
  for (auto& b : h.boxes) {
    b.x = r.u16();
    b.y = r.u16();
    b.w = r.u16();
    b.h = r.u16();
    b.level = r.u8();
  }
  h.bands.resize(static_cast<std::size_t>(h.channels) *
                 static_cast<std::size_t>(bands_per_channel(h.levels)));
  for (auto& p : h.bands) {
    p.mean = r.f32();
    p.scale = r.f32();
  }
  h.selected_count = r.u32();
  const auto rest = r.rest();
  bs.payload.assign(rest.begin(), rest.end());
  return bs;
}

}  // namespace crowdshare::codec
