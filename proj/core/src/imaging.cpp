// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/imaging.hpp"

#include <algorithm>
#include <cmath>

namespace crowdshare::imaging {

namespace {

// Full-range BT.601.
constexpr double kKr = 0.299;
constexpr double kKg = 0.587;
constexpr double kKb = 0.114;
constexpr double kCbScale = 0.564;
constexpr double kCrScale = 0.713;

}  // namespace

const char* to_string(ColorSpace space) noexcept {
  switch (space) {
    case ColorSpace::Gray: return "Gray";
    case ColorSpace::RGB: return "RGB";
    case ColorSpace::YCbCr: return "YCbCr";
  }
  return "?";
}

RasterImage RasterImage::blank(int width, int height, ColorSpace space, double fill) {
  RasterImage image;
  image.width = width;
  image.height = height;
  image.original_width = width;
  image.original_height = height;
  image.color_space = space;
  const int channels = space == ColorSpace::Gray ? 1 : 3;
  image.planes.assign(static_cast<std::size_t>(channels), Plane(width, height, fill));
  return image;
}

void RasterImage::validate() const {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  const int c = channels();
  if (c != 1 && c != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels");
  }
  if ((color_space == ColorSpace::Gray) != (c == 1)) {
    throw std::invalid_argument("Gray color space requires exactly one channel");
  }
  for (const auto& plane : planes) {
    if (plane.width() != width || plane.height() != height) {
      throw std::invalid_argument("plane size does not match image size");
    }
  }
  if (original_width <= 0 || original_height <= 0 || original_width > width ||
      original_height > height) {
    throw std::invalid_argument("original dimensions must lie within the image");
  }
}

RasterImage color_convert(const RasterImage& image, ColorDirection direction) {
  if (image.channels() != 3) {
    throw std::invalid_argument("color conversion needs a 3-channel image");
  }
  const ColorSpace expected =
      direction == ColorDirection::RgbToYcbcr ? ColorSpace::RGB : ColorSpace::YCbCr;
  if (image.color_space != expected) {
    throw std::invalid_argument(std::string("color conversion expects ") +
                                to_string(expected) + " input, got " +
                                to_string(image.color_space));
  }

  RasterImage out = image;
  const auto& p0 = image.planes[0];
  const auto& p1 = image.planes[1];
  const auto& p2 = image.planes[2];
  const std::size_t n = p0.size();

  if (direction == ColorDirection::RgbToYcbcr) {
    out.color_space = ColorSpace::YCbCr;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = p0[i], g = p1[i], b = p2[i];
      const double y = kKr * r + kKg * g + kKb * b;
      out.planes[0][i] = y;
      out.planes[1][i] = 128.0 + (b - y) * kCbScale;
      out.planes[2][i] = 128.0 + (r - y) * kCrScale;
    }
  } else {
    out.color_space = ColorSpace::RGB;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = p0[i];
      const double b = y + (p1[i] - 128.0) / kCbScale;
      const double r = y + (p2[i] - 128.0) / kCrScale;
      const double g = (y - kKr * r - kKb * b) / kKg;
      out.planes[0][i] = r;
      out.planes[1][i] = g;
      out.planes[2][i] = b;
    }
  }
  return out;
}

RasterImage pad_to_dyadic(const RasterImage& image, int levels) {
  if (levels < 1) {
    throw std::invalid_argument("pad_to_dyadic requires levels >= 1");
  }
  if (levels > 16) {
    throw std::invalid_argument("pad_to_dyadic supports at most 16 levels");
  }
  const int block = 1 << levels;
  const int width = (image.width + block - 1) / block * block;
  const int height = (image.height + block - 1) / block * block;
  if (width == image.width && height == image.height) {
    return image;
  }

  RasterImage out;
  out.width = width;
  out.height = height;
  out.color_space = image.color_space;
  out.original_width = image.original_width;
  out.original_height = image.original_height;
  out.planes.reserve(image.planes.size());
  for (const auto& src : image.planes) {
    Plane dst(width, height);
    for (int y = 0; y < height; ++y) {
      const int sy = std::min(y, image.height - 1);
      for (int x = 0; x < width; ++x) {
        dst.at(x, y) = src.at(std::min(x, image.width - 1), sy);
      }
    }
    out.planes.push_back(std::move(dst));
  }
  return out;
}

RasterImage crop(const RasterImage& image, int width, int height) {
  if (width <= 0 || height <= 0 || width > image.width || height > image.height) {
    throw std::invalid_argument("crop window outside image");
  }
  RasterImage out;
  out.width = width;
  out.height = height;
  out.original_width = width;
  out.original_height = height;
  out.color_space = image.color_space;
  for (const auto& src : image.planes) {
    Plane dst(width, height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) dst.at(x, y) = src.at(x, y);
    }
    out.planes.push_back(std::move(dst));
  }
  return out;
}

Plane luminance(const RasterImage& image) {
  if (image.channels() == 1 || image.color_space == ColorSpace::YCbCr) {
    return image.planes.at(0);
  }
  Plane y(image.width, image.height);
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = kKr * image.planes[0][i] + kKg * image.planes[1][i] + kKb * image.planes[2][i];
  }
  return y;
}

std::uint8_t to_byte(double value) noexcept {
  if (!(value > 0.0)) return 0;  // also maps NaN to 0
  if (value >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(value));
}

}  // namespace crowdshare::imaging
