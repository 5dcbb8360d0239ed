// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "crowdshare/codec.hpp"

namespace crowdshare::codec {

using wavelet::Band;

namespace {

struct QuantizedBand {
  BandParams params;
  BasicPlane<std::uint8_t> codes;
};

QuantizedBand quantize_band(const Plane& band) {
  QuantizedBand out{{}, BasicPlane<std::uint8_t>(band.width(), band.height())};
  const auto [lo, hi] = std::minmax_element(band.begin(), band.end());
  if (*lo == *hi) {
    out.params.mean = static_cast<float>(*lo);
    return out;
  }

  double sum = 0.0;
  for (double v : band) sum += v;
  const float mean = static_cast<float>(sum / static_cast<double>(band.size()));

  double max_dev = 0.0;
  for (double v : band) max_dev = std::max(max_dev, std::abs(v - static_cast<double>(mean)));

  // Round the f32 step up until it covers the extreme deviation, so no
  // code is clipped after the wire rounding of mean and scale.
  float scale = static_cast<float>(max_dev / kCodeCenter);
  if (scale <= 0.0f) scale = std::numeric_limits<float>::denorm_min();
  while (static_cast<double>(scale) * kCodeCenter < max_dev) {
    scale = std::nextafter(scale, std::numeric_limits<float>::infinity());
  }

  out.params = {mean, scale};
  for (std::size_t i = 0; i < band.size(); ++i) {
    const double x = (band[i] - static_cast<double>(mean)) / static_cast<double>(scale) + kCodeCenter;
    out.codes[i] = static_cast<std::uint8_t>(std::clamp<long>(std::lround(x), 0, 255));
  }
  return out;
}

}  // namespace

int band_index(int levels, int level, Band band) {
  if (level < 1 || level > levels) throw std::out_of_range("band level out of range");
  if (band == Band::LL) {
    if (level != levels) throw std::out_of_range("LL band exists only at the top level");
    return 0;
  }
  return 1 + 3 * (levels - level) + (static_cast<int>(band) - 1);
}

const BandParams& QuantizedPyramid::params(int level, Band band) const {
  return bands.at(static_cast<std::size_t>(band_index(codes.levels, level, band)));
}

QuantizedPyramid quantize_subbands(const WaveletPyramid& pyramid) {
  pyramid.validate();
  QuantizedPyramid q;
  q.codes = wavelet::BasicPyramid<std::uint8_t>::zeros(pyramid.source_width, pyramid.source_height,
                                                        pyramid.levels);
  q.bands.resize(static_cast<std::size_t>(bands_per_channel(pyramid.levels)));

  auto run = [&](int level, Band band) {
    auto qb = quantize_band(pyramid.band(level, band));
    q.bands[static_cast<std::size_t>(band_index(pyramid.levels, level, band))] = qb.params;
    q.codes.band(level, band) = std::move(qb.codes);
  };
  run(pyramid.levels, Band::LL);
  for (int k = pyramid.levels; k >= 1; --k) {
    run(k, Band::LH);
    run(k, Band::HL);
    run(k, Band::HH);
  }
  return q;
}

double dequantize_value(const BandParams& params, std::uint8_t code) noexcept {
  if (params.scale == 0.0f) return static_cast<double>(params.mean);
  return static_cast<double>(params.mean) +
         static_cast<double>(params.scale) * (static_cast<double>(code) - kCodeCenter);
}

namespace {

void check_address(const wavelet::BasicPyramid<std::uint8_t>& shape, const CoefficientAddress& a) {
  const auto& plane = shape.band(a.level, a.band);  // throws on bad level/band
  if (a.row >= plane.height() || a.col >= plane.width()) {
    throw std::out_of_range("coefficient address outside its sub-band");
  }
}

WaveletPyramid fallback_pyramid(int width, int height, int levels, double ll_mean) {
  auto p = WaveletPyramid::zeros(width, height, levels);
  std::fill(p.top_ll.begin(), p.top_ll.end(), ll_mean);
  return p;
}

}  // namespace

WaveletPyramid dequantize_subbands(const QuantizedPyramid& quantized,
                                   std::span<const CoefficientAddress> kept) {
  const auto& codes = quantized.codes;
  const auto& ll = quantized.params(codes.levels, Band::LL);
  auto out = fallback_pyramid(codes.source_width, codes.source_height, codes.levels,
                              static_cast<double>(ll.mean));
  for (const auto& a : kept) {
    check_address(codes, a);
    out.at(a) = dequantize_value(quantized.params(a.level, a.band), codes.at(a));
  }
  return out;
}

WaveletPyramid keep_exact(const WaveletPyramid& pyramid, std::span<const CoefficientAddress> kept) {
  double sum = 0.0;
  for (double v : pyramid.top_ll) sum += v;
  const double mean = sum / static_cast<double>(pyramid.top_ll.size());
  auto out = fallback_pyramid(pyramid.source_width, pyramid.source_height, pyramid.levels, mean);
  for (const auto& a : kept) {
    const auto& plane = pyramid.band(a.level, a.band);
    if (a.row >= plane.height() || a.col >= plane.width()) {
      throw std::out_of_range("coefficient address outside its sub-band");
    }
    out.at(a) = pyramid.at(a);
  }
  return out;
}

std::size_t prefix_length(std::size_t total, double budget_fraction) {
  if (!(budget_fraction > 0.0) || budget_fraction > 1.0) {
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  }
  // The small slack keeps products such as 0.3 * 1000 from rounding up
  // past the exact value.
  const double exact = budget_fraction * static_cast<double>(total);
  auto n = static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
  return std::clamp<std::size_t>(n, total == 0 ? 0 : 1, total);
}

std::span<const CoefficientAddress> select_coefficients(std::span<const CoefficientAddress> order,
                                                        double budget_fraction) {
  return order.first(prefix_length(order.size(), budget_fraction));
}

}  // namespace crowdshare::codec
