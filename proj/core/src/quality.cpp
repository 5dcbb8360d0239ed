// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "crowdshare/codec.hpp"

namespace crowdshare::codec {

QualityReport quality_metrics(const imaging::RasterImage& original,
                              const imaging::RasterImage& reconstructed, const PixelMask* mask) {
  if (original.width != reconstructed.width || original.height != reconstructed.height ||
      original.channels() != reconstructed.channels()) {
    throw std::invalid_argument("quality_metrics: image dimensions differ");
  }
  if (mask && (mask->width() != original.width || mask->height() != original.height)) {
    throw std::invalid_argument("quality_metrics: mask size differs from the images");
  }

  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < original.planes.size(); ++c) {
    const auto& a = original.planes[c];
    const auto& b = reconstructed.planes[c];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask && (*mask)[i] == 0) continue;
      const double d = a[i] - b[i];
      sum += d * d;
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("quality_metrics: empty mask");

  QualityReport report;
  report.samples = n;
  report.mse = sum / static_cast<double>(n);
  if (report.mse > 0.0) report.psnr_db = 10.0 * std::log10(255.0 * 255.0 / report.mse);
  return report;
}

PixelMask box_mask(int width, int height, std::span<const saliency::SalientBox> boxes) {
  PixelMask mask(width, height, 0);
  for (const auto& b : boxes) {
    for (int y = std::max(0, b.y); y < std::min(height, b.y + b.h); ++y) {
      for (int x = std::max(0, b.x); x < std::min(width, b.x + b.w); ++x) mask.at(x, y) = 1;
    }
  }
  return mask;
}

}  // namespace crowdshare::codec
