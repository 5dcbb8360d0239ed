// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/wavelet.hpp"

namespace crowdshare::wavelet {

const char* to_string(Band band) noexcept {
  switch (band) {
    case Band::LL: return "LL";
    case Band::LH: return "LH";
    case Band::HL: return "HL";
    case Band::HH: return "HH";
  }
  return "?";
}

void require_dyadic(int width, int height, int levels) {
  if (levels < 1 || levels > 16) {
    throw std::invalid_argument("wavelet levels must be in [1, 16]");
  }
  const int block = 1 << levels;
  if (width <= 0 || height <= 0 || width % block != 0 || height % block != 0) {
    throw std::invalid_argument("plane " + std::to_string(width) + "x" + std::to_string(height) +
                                " is not a multiple of 2^" + std::to_string(levels));
  }
}

WaveletPyramid haar_forward(const Plane& plane, int levels) {
  require_dyadic(plane.width(), plane.height(), levels);
  auto pyramid = WaveletPyramid::zeros(plane.width(), plane.height(), levels);

  Plane current = plane;
  for (int k = 1; k <= levels; ++k) {
    const int w = current.width() / 2;
    const int h = current.height() / 2;
    Plane ll(w, h);
    auto& d = pyramid.details[static_cast<std::size_t>(k - 1)];
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double a = current.at(2 * x, 2 * y);
        const double b = current.at(2 * x + 1, 2 * y);
        const double c = current.at(2 * x, 2 * y + 1);
        const double e = current.at(2 * x + 1, 2 * y + 1);
        ll.at(x, y) = (a + b + c + e) * 0.5;
        d.hl.at(x, y) = (a - b + c - e) * 0.5;
        d.lh.at(x, y) = (a + b - c - e) * 0.5;
        d.hh.at(x, y) = (a - b - c + e) * 0.5;
      }
    }
    current = std::move(ll);
  }
  pyramid.top_ll = std::move(current);
  return pyramid;
}

Plane haar_inverse(const WaveletPyramid& pyramid) {
  pyramid.validate();
  Plane current = pyramid.top_ll;
  for (int k = pyramid.levels; k >= 1; --k) {
    const auto& d = pyramid.details[static_cast<std::size_t>(k - 1)];
    const int w = current.width();
    const int h = current.height();
    Plane next(2 * w, 2 * h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double ll = current.at(x, y);
        const double hl = d.hl.at(x, y);
        const double lh = d.lh.at(x, y);
        const double hh = d.hh.at(x, y);
        next.at(2 * x, 2 * y) = (ll + hl + lh + hh) * 0.5;
        next.at(2 * x + 1, 2 * y) = (ll - hl + lh - hh) * 0.5;
        next.at(2 * x, 2 * y + 1) = (ll + hl - lh - hh) * 0.5;
        next.at(2 * x + 1, 2 * y + 1) = (ll - hl - lh + hh) * 0.5;
      }
    }
    current = std::move(next);
  }
  return current;
}

std::vector<CoefficientAddress> raster_order(int width, int height, int levels) {
  require_dyadic(width, height, levels);
  std::vector<CoefficientAddress> order;
  order.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  auto emit = [&](int level, Band band) {
    const int w = width >> level;
    const int h = height >> level;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        order.push_back({static_cast<std::uint8_t>(level), band, static_cast<std::uint16_t>(r),
                         static_cast<std::uint16_t>(c)});
      }
    }
  };
  emit(levels, Band::LL);
  for (int k = levels; k >= 1; --k) {
    emit(k, Band::LH);
    emit(k, Band::HL);
    emit(k, Band::HH);
  }
  return order;
}

}  // namespace crowdshare::wavelet
