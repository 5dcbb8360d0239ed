// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/codec.hpp"

#include <algorithm>
#include <cmath>

#include "crowdshare/entropy.hpp"

namespace crowdshare::codec {

using imaging::ColorSpace;
using imaging::RasterImage;
using wavelet::Band;

namespace {

imaging::RasterImage to_coded_space(const RasterImage& image) {
  image.validate();
  if (image.color_space == ColorSpace::RGB) {
    return imaging::color_convert(image, imaging::ColorDirection::RgbToYcbcr);
  }
  if (image.color_space == ColorSpace::YCbCr) {
    throw std::invalid_argument("encoder expects RGB or Gray input");
  }
  return image;
}

saliency::SaliencyAnnotation header_annotation(const BitstreamHeader& header) {
  saliency::SaliencyAnnotation ann;
  for (std::size_t i = 0; i < header.boxes.size(); ++i) {
    const auto& b = header.boxes[i];
    ann.boxes.push_back({b.x, b.y, b.w, b.h, b.level, "box" + std::to_string(i)});
  }
  return ann;
}

std::vector<BoxRecord> header_boxes(const saliency::SaliencyAnnotation& annotation,
                                    const std::optional<saliency::LabelSet>& selected) {
  std::vector<BoxRecord> boxes;
  for (const auto& b : annotation.boxes) {
    if (selected && !selected->contains(b.label)) continue;
    if (b.x > 0xFFFF || b.y > 0xFFFF || b.w > 0xFFFF || b.h > 0xFFFF || b.level > 0xFF) {
      throw CodecError("box '" + b.label + "' does not fit the SGWC header fields");
    }
    boxes.push_back({static_cast<std::uint16_t>(b.x), static_cast<std::uint16_t>(b.y),
                     static_cast<std::uint16_t>(b.w), static_cast<std::uint16_t>(b.h),
                     static_cast<std::uint8_t>(b.level)});
  }
  return boxes;
}

}  // namespace

std::vector<WaveletPyramid> analyze_image(const RasterImage& image, int levels) {
  const auto padded = imaging::pad_to_dyadic(to_coded_space(image), levels);
  std::vector<WaveletPyramid> channels;
  channels.reserve(padded.planes.size());
  for (const auto& plane : padded.planes) channels.push_back(wavelet::haar_forward(plane, levels));

  // Chroma sub-sampling surrogate: drop the finest-scale details of Cb, Cr.
  for (std::size_t c = 1; c < channels.size(); ++c) {
    auto& finest = channels[c].details.front();
    for (auto* band : {&finest.lh, &finest.hl, &finest.hh}) {
      std::fill(band->begin(), band->end(), 0.0);
    }
  }
  return channels;
}

RasterImage synthesize_image(const std::vector<WaveletPyramid>& channels, int original_width,
                             int original_height, bool clamp) {
  if (channels.size() != 1 && channels.size() != 3) {
    throw std::invalid_argument("synthesize_image needs 1 or 3 channels");
  }
  RasterImage padded;
  padded.width = channels.front().source_width;
  padded.height = channels.front().source_height;
  padded.original_width = padded.width;
  padded.original_height = padded.height;
  padded.color_space = channels.size() == 3 ? ColorSpace::YCbCr : ColorSpace::Gray;
  for (const auto& pyr : channels) padded.planes.push_back(wavelet::haar_inverse(pyr));
  padded.validate();

  if (padded.color_space == ColorSpace::YCbCr) {
    padded = imaging::color_convert(padded, imaging::ColorDirection::YcbcrToRgb);
  }
  auto out = imaging::crop(padded, original_width, original_height);
  if (clamp) {
    for (auto& plane : out.planes) {
      for (auto& v : plane) v = std::clamp(v, 0.0, 255.0);
    }
  }
  return out;
}

std::vector<WaveletPyramid> reconstruct_prefix(const std::vector<WaveletPyramid>& channels,
                                               std::span<const CoefficientAddress> order,
                                               std::size_t count, QuantizationMode mode) {
  const auto kept = order.first(std::min(count, order.size()));
  std::vector<WaveletPyramid> out;
  out.reserve(channels.size());
  for (const auto& pyr : channels) {
    if (mode == QuantizationMode::Bypass) {
      out.push_back(keep_exact(pyr, kept));
    } else {
      out.push_back(dequantize_subbands(quantize_subbands(pyr), kept));
    }
  }
  return out;
}

std::vector<CoefficientAddress> encoder_order(const RasterImage& image,
                                              const saliency::SaliencyAnnotation& annotation,
                                              const EncoderConfig& config) {
  if (config.levels < 1 || config.levels > 16) {
    throw std::invalid_argument("wavelet levels must be in [1, 16]");
  }
  const int block = 1 << config.levels;
  const int width = (image.width + block - 1) / block * block;
  const int height = (image.height + block - 1) / block * block;
  return saliency::transmission_order(annotation, width, height, config.levels,
                                      config.selected_labels);
}

std::vector<CoefficientAddress> decoder_order(const BitstreamHeader& header) {
  return saliency::transmission_order(header_annotation(header), static_cast<int>(header.width),
                                      static_cast<int>(header.height), header.levels);
}

Bitstream encode_image(const RasterImage& image, const saliency::SaliencyAnnotation& annotation,
                       const EncoderConfig& config) {
  const auto channels = analyze_image(image, config.levels);
  const auto& shape = channels.front();
  const auto order = encoder_order(image, annotation, config);
  const auto selected = select_coefficients(order, config.budget_fraction);

  Bitstream bs;
  auto& h = bs.header;
  h.width = static_cast<std::uint32_t>(shape.source_width);
  h.height = static_cast<std::uint32_t>(shape.source_height);
  h.original_width = static_cast<std::uint32_t>(image.original_width);
  h.original_height = static_cast<std::uint32_t>(image.original_height);
  h.levels = static_cast<std::uint8_t>(config.levels);
  h.channels = static_cast<std::uint8_t>(channels.size());
  h.boxes = header_boxes(annotation, config.selected_labels);
  h.selected_count = static_cast<std::uint32_t>(selected.size());

  std::vector<std::uint8_t> raw;
  raw.reserve(selected.size() * channels.size());
  for (const auto& pyr : channels) {
    const auto q = quantize_subbands(pyr);
    h.bands.insert(h.bands.end(), q.bands.begin(), q.bands.end());
    for (const auto& a : selected) raw.push_back(q.codes.at(a));
  }
  bs.payload = entropy::entropy_encode(raw);
  return bs;
}

Bitstream encode_to_size(const RasterImage& image, const saliency::SaliencyAnnotation& annotation,
                         EncoderConfig config, std::size_t target_bytes) {
  auto size_at = [&](double fraction, Bitstream& out) {
    config.budget_fraction = fraction;
    out = encode_image(image, annotation, config);
    return serialize_bitstream(out).size();
  };

  Bitstream best;
  Bitstream trial;
  if (size_at(1.0, trial) <= target_bytes) return trial;

  double lo = 0.0;
  double hi = 1.0;
  bool have_best = false;
  for (int iter = 0; iter < 30; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const std::size_t size = size_at(mid, trial);
    if (size <= target_bytes) {
      lo = mid;
      best = trial;
      have_best = true;
      if (static_cast<double>(size) >= 0.95 * static_cast<double>(target_bytes)) break;
    } else {
      hi = mid;
    }
  }
  if (!have_best) size_at(std::max(hi, 1e-9), best);
  return best;
}

RasterImage decode_image(const Bitstream& bitstream) {
  const auto& h = bitstream.header;
  if (h.version != kVersion) throw CodecError("unsupported SGWC version");
  const int width = static_cast<int>(h.width);
  const int height = static_cast<int>(h.height);
  try {
    wavelet::require_dyadic(width, height, h.levels);
  } catch (const std::invalid_argument& e) {
    throw CodecError(std::string("SGWC header: ") + e.what());
  }
  if (h.original_width == 0 || h.original_height == 0 || h.original_width > h.width ||
      h.original_height > h.height) {
    throw CodecError("SGWC header: original dimensions outside the coded frame");
  }
  const std::size_t per_channel = static_cast<std::size_t>(bands_per_channel(h.levels));
  if (h.bands.size() != per_channel * h.channels) {
    throw CodecError("SGWC header: band parameter count mismatch");
  }

  std::vector<CoefficientAddress> order;
  try {
    order = decoder_order(h);
  } catch (const std::exception& e) {
    throw CodecError(std::string("SGWC header: ") + e.what());
  }
  if (h.selected_count > order.size()) {
    throw CodecError("SGWC header: selected_count exceeds coefficient count");
  }

  std::vector<std::uint8_t> raw;
  try {
    raw = entropy::entropy_decode(bitstream.payload);
  } catch (const entropy::EntropyError& e) {
    throw CodecError(std::string("SGWC payload: ") + e.what());
  }
  const std::size_t expected = static_cast<std::size_t>(h.selected_count) * h.channels;
  if (raw.size() < expected) {
    throw CodecError("SGWC payload shorter than selected_count");
  }
  if (raw.size() > expected) {
    throw CodecError("SGWC payload longer than selected_count");
  }

  const auto kept = std::span<const CoefficientAddress>(order).first(h.selected_count);
  std::vector<WaveletPyramid> channels;
  for (std::size_t c = 0; c < h.channels; ++c) {
    QuantizedPyramid q;
    q.codes = wavelet::BasicPyramid<std::uint8_t>::zeros(width, height, h.levels);
    q.bands.assign(h.bands.begin() + static_cast<std::ptrdiff_t>(c * per_channel),
                   h.bands.begin() + static_cast<std::ptrdiff_t>((c + 1) * per_channel));
    for (std::size_t i = 0; i < kept.size(); ++i) q.codes.at(kept[i]) = raw[c * kept.size() + i];
    channels.push_back(dequantize_subbands(q, kept));
  }
  return synthesize_image(channels, static_cast<int>(h.original_width),
                          static_cast<int>(h.original_height), true);
}

}  // namespace crowdshare::codec
