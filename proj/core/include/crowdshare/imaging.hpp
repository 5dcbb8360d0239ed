// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crowdshare/plane.hpp"

namespace crowdshare::imaging {

enum class ColorSpace { Gray, RGB, YCbCr };

const char* to_string(ColorSpace space) noexcept;

/// Multi-channel raster of real-valued samples, nominally in [0, 255].
///
/// `original_width`/`original_height` remember the size before dyadic
/// padding so decoders can crop back.
struct RasterImage {
  int width = 0;
  int height = 0;
  ColorSpace color_space = ColorSpace::Gray;
  std::vector<Plane> planes;
  int original_width = 0;
  int original_height = 0;

  int channels() const noexcept { return static_cast<int>(planes.size()); }

  /// Blank image with all samples set to `fill`.
  static RasterImage blank(int width, int height, ColorSpace space, double fill = 0.0);

  /// Throws std::invalid_argument when the type invariants do not hold.
  void validate() const;
};

enum class PnmErrorKind { MalformedHeader, UnsupportedMaxval, TruncatedPayload };

class PnmError : public std::runtime_error {
 public:
  PnmError(PnmErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  PnmErrorKind kind() const noexcept { return kind_; }

 private:
  PnmErrorKind kind_;
};

enum class PnmEncoding { Binary, Ascii };

/// Parses P2/P5 (gray) and P3/P6 (RGB) with maxval 255.
RasterImage load_image(std::span<const std::uint8_t> bytes);

/// Writes P5/P6 (or P2/P3 for Ascii). Samples are rounded and clamped to
/// [0, 255]. YCbCr input is rejected.
std::vector<std::uint8_t> save_image(const RasterImage& image,
                                     PnmEncoding encoding = PnmEncoding::Binary);

RasterImage read_image_file(const std::string& path);
void write_image_file(const std::string& path, const RasterImage& image,
                      PnmEncoding encoding = PnmEncoding::Binary);

enum class ColorDirection { RgbToYcbcr, YcbcrToRgb };

/// Full-range BT.601. No rounding is applied, so the round trip is exact up
/// to floating-point error.
RasterImage color_convert(const RasterImage& image, ColorDirection direction);

/// Grows width/height to the next multiple of 2^levels by replicating the
/// last column/row. Identity when already aligned.
RasterImage pad_to_dyadic(const RasterImage& image, int levels);

/// Crops to the top-left `width`×`height` window and resets the original
/// dimensions to match.
RasterImage crop(const RasterImage& image, int width, int height);

/// Luma plane of an RGB/Gray image (the Y channel for YCbCr).
Plane luminance(const RasterImage& image);

std::uint8_t to_byte(double value) noexcept;

}  // namespace crowdshare::imaging
