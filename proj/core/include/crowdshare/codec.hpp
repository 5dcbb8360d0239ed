// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdshare/imaging.hpp"
#include "crowdshare/saliency.hpp"
#include "crowdshare/wavelet.hpp"

namespace crowdshare::codec {

using wavelet::CoefficientAddress;
using wavelet::WaveletPyramid;

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Quantization

/// Per-sub-band dequantization parameters, stored as f32 on the wire.
/// scale == 0 marks a constant band whose value is `mean`.
struct BandParams {
  float mean = 0.0f;
  float scale = 0.0f;

  friend bool operator==(const BandParams&, const BandParams&) = default;
};

/// Codes are centered on 127.5: value = mean + scale * (code - 127.5).
constexpr double kCodeCenter = 127.5;

struct QuantizedPyramid {
  wavelet::BasicPyramid<std::uint8_t> codes;
  std::vector<BandParams> bands;  // indexed by band_index()

  const BandParams& params(int level, wavelet::Band band) const;
};

/// Sub-bands per channel: the top LL plus three per level.
constexpr int bands_per_channel(int levels) noexcept { return 1 + 3 * levels; }

/// 0 for the top LL, then LH/HL/HH for level K, K-1, ..., 1.
int band_index(int levels, int level, wavelet::Band band);

/// Mean-subtracts each band and maps it onto 8-bit codes. The step is
/// 2*max|v - mean|/255 (rounded up to the next f32), so every code stays
/// in [0, 255] and the reconstruction error is at most scale/2.
QuantizedPyramid quantize_subbands(const WaveletPyramid& pyramid);

double dequantize_value(const BandParams& params, std::uint8_t code) noexcept;

/// Rebuilds a pyramid from the kept codes. Missing detail coefficients are
/// 0; missing top-LL coefficients take the band mean.
WaveletPyramid dequantize_subbands(const QuantizedPyramid& quantized,
                                   std::span<const CoefficientAddress> kept);

/// Same fill rule with exact coefficients (quantizer bypassed).
WaveletPyramid keep_exact(const WaveletPyramid& pyramid, std::span<const CoefficientAddress> kept);

// ---------------------------------------------------------------------------
// Selection

/// ceil(budget_fraction * total), at least 1. Throws std::invalid_argument
/// unless 0 < budget_fraction <= 1.
std::size_t prefix_length(std::size_t total, double budget_fraction);

std::span<const CoefficientAddress> select_coefficients(std::span<const CoefficientAddress> order,
                                                        double budget_fraction);

// ---------------------------------------------------------------------------
// Bitstream

struct BoxRecord {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint16_t w = 0;
  std::uint16_t h = 0;
  std::uint8_t level = 1;

  friend bool operator==(const BoxRecord&, const BoxRecord&) = default;
};

inline constexpr char kMagic[4] = {'S', 'G', 'W', 'C'};
constexpr std::uint8_t kVersion = 1;

/// Fixed little-endian header:
///   "SGWC" version:u8 width:u32 height:u32 original_width:u32
///   original_height:u32 levels:u8 channels:u8 box_count:u16
///   box_count × {x:u16 y:u16 w:u16 h:u16 level:u8}
///   channels × (1 + 3·levels) × {mean:f32 scale:f32}
///   selected_count:u32
/// followed by the entropy-coded payload up to end of file.
struct BitstreamHeader {
  std::uint8_t version = kVersion;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t original_width = 0;
  std::uint32_t original_height = 0;
  std::uint8_t levels = 0;
  std::uint8_t channels = 0;
  std::vector<BoxRecord> boxes;
  std::vector<BandParams> bands;  // channel-major, band_index() within a channel
  std::uint32_t selected_count = 0;

  friend bool operator==(const BitstreamHeader&, const BitstreamHeader&) = default;
};

struct Bitstream {
  BitstreamHeader header;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

std::vector<std::uint8_t> serialize_bitstream(const Bitstream& bitstream);

/// Throws CodecError on bad magic/version or a truncated header.
Bitstream parse_bitstream(std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Encoder / decoder

struct EncoderConfig {
  int levels = 3;
  double budget_fraction = 1.0;
  /// When set, boxes with other labels are coded as background.
  std::optional<saliency::LabelSet> selected_labels;
};

/// Coded-domain planes: YCbCr for color input (Gray stays Gray), padded to
/// a multiple of 2^levels, transformed, and with the finest-level details
/// of Cb/Cr forced to zero.
std::vector<WaveletPyramid> analyze_image(const imaging::RasterImage& image, int levels);

/// Inverse transform, YCbCr→RGB for three channels, crop to the original
/// size and optionally clamp to [0, 255].
imaging::RasterImage synthesize_image(const std::vector<WaveletPyramid>& channels,
                                      int original_width, int original_height, bool clamp);

enum class QuantizationMode { Quantized, Bypass };

/// Keeps the first `count` addresses of `order` in every channel and fills
/// the rest by the decoder's rule.
std::vector<WaveletPyramid> reconstruct_prefix(const std::vector<WaveletPyramid>& channels,
                                               std::span<const CoefficientAddress> order,
                                               std::size_t count, QuantizationMode mode);

/// The order the encoder transmits coefficients in for this image.
std::vector<CoefficientAddress> encoder_order(const imaging::RasterImage& image,
                                              const saliency::SaliencyAnnotation& annotation,
                                              const EncoderConfig& config);

/// The order the decoder recomputes from header boxes alone.
std::vector<CoefficientAddress> decoder_order(const BitstreamHeader& header);

Bitstream encode_image(const imaging::RasterImage& image,
                       const saliency::SaliencyAnnotation& annotation, const EncoderConfig& config);

/// Searches the budget fraction so the serialized size lands within 5% of
/// `target_bytes` (or as close below it as possible).
Bitstream encode_to_size(const imaging::RasterImage& image,
                         const saliency::SaliencyAnnotation& annotation, EncoderConfig config,
                         std::size_t target_bytes);

imaging::RasterImage decode_image(const Bitstream& bitstream);

// ---------------------------------------------------------------------------
// Quality

using PixelMask = BasicPlane<std::uint8_t>;

struct QualityReport {
  double mse = 0.0;
  /// +infinity when the images are identical.
  double psnr_db = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;

  bool identical() const noexcept { return mse == 0.0; }
};

/// MSE over all channels (restricted to non-zero mask pixels when a mask
/// is given) and PSNR against a 255 peak.
QualityReport quality_metrics(const imaging::RasterImage& original,
                              const imaging::RasterImage& reconstructed,
                              const PixelMask* mask = nullptr);

/// Non-zero inside any of the boxes.
PixelMask box_mask(int width, int height, std::span<const saliency::SalientBox> boxes);

}  // namespace crowdshare::codec
