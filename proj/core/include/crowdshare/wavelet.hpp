// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "crowdshare/plane.hpp"

namespace crowdshare::wavelet {

/// Sub-band labels. HL holds horizontal differences, LH vertical ones.
enum class Band : std::uint8_t { LL = 0, LH = 1, HL = 2, HH = 3 };

const char* to_string(Band band) noexcept;

/// Location of one coefficient. `level` is 1-based; the single LL band
/// lives at level K alongside that level's detail bands.
struct CoefficientAddress {
  std::uint8_t level = 0;
  Band band = Band::LL;
  std::uint16_t row = 0;
  std::uint16_t col = 0;

  friend bool operator==(const CoefficientAddress&, const CoefficientAddress&) = default;
};

template <typename T>
struct DetailBands {
  BasicPlane<T> lh;
  BasicPlane<T> hl;
  BasicPlane<T> hh;

  friend bool operator==(const DetailBands&, const DetailBands&) = default;
};

/// K-level dyadic decomposition: one top LL band plus LH/HL/HH per level.
/// `details[k - 1]` holds level k, whose planes are (W/2^k)×(H/2^k).
template <typename T>
struct BasicPyramid {
  int levels = 0;
  int source_width = 0;
  int source_height = 0;
  BasicPlane<T> top_ll;
  std::vector<DetailBands<T>> details;

  static BasicPyramid zeros(int width, int height, int levels);

  BasicPlane<T>& band(int level, Band b);
  const BasicPlane<T>& band(int level, Band b) const;

  T& at(const CoefficientAddress& a) {
    return band(a.level, a.band).at(a.col, a.row);
  }
  const T& at(const CoefficientAddress& a) const {
    return band(a.level, a.band).at(a.col, a.row);
  }

  std::size_t coefficient_count() const noexcept;

  /// Throws std::invalid_argument when plane sizes disagree with the level
  /// structure.
  void validate() const;

  friend bool operator==(const BasicPyramid&, const BasicPyramid&) = default;
};

using WaveletPyramid = BasicPyramid<double>;

/// Throws std::invalid_argument unless width/height are positive multiples
/// of 2^levels and 1 <= levels <= 16.
void require_dyadic(int width, int height, int levels);

/// Orthonormal 2D Haar analysis. For each 2×2 block [[a, b], [c, d]]:
/// LL = (a+b+c+d)/2, HL = (a-b+c-d)/2, LH = (a+b-c-d)/2, HH = (a-b-c+d)/2.
WaveletPyramid haar_forward(const Plane& plane, int levels);

/// Exact inverse of haar_forward.
Plane haar_inverse(const WaveletPyramid& pyramid);

/// Every coefficient address in the canonical coarse-to-fine raster order:
/// level K first, bands LL < LH < HL < HH, row-major within a band.
std::vector<CoefficientAddress> raster_order(int width, int height, int levels);

// ---------------------------------------------------------------------------

template <typename T>
BasicPyramid<T> BasicPyramid<T>::zeros(int width, int height, int levels) {
  require_dyadic(width, height, levels);
  BasicPyramid p;
  p.levels = levels;
  p.source_width = width;
  p.source_height = height;
  p.top_ll = BasicPlane<T>(width >> levels, height >> levels);
  p.details.reserve(static_cast<std::size_t>(levels));
  for (int k = 1; k <= levels; ++k) {
    const int w = width >> k;
    const int h = height >> k;
    p.details.push_back({BasicPlane<T>(w, h), BasicPlane<T>(w, h), BasicPlane<T>(w, h)});
  }
  return p;
}

template <typename T>
BasicPlane<T>& BasicPyramid<T>::band(int level, Band b) {
  return const_cast<BasicPlane<T>&>(std::as_const(*this).band(level, b));
}

template <typename T>
const BasicPlane<T>& BasicPyramid<T>::band(int level, Band b) const {
  if (level < 1 || level > levels) throw std::out_of_range("pyramid level out of range");
  if (b == Band::LL) {
    if (level != levels) throw std::out_of_range("LL band exists only at the top level");
    return top_ll;
  }
  const auto& d = details[static_cast<std::size_t>(level - 1)];
  switch (b) {
    case Band::LH: return d.lh;
    case Band::HL: return d.hl;
    default: return d.hh;
  }
}

template <typename T>
std::size_t BasicPyramid<T>::coefficient_count() const noexcept {
  std::size_t n = top_ll.size();
  for (const auto& d : details) n += d.lh.size() + d.hl.size() + d.hh.size();
  return n;
}

template <typename T>
void BasicPyramid<T>::validate() const {
  require_dyadic(source_width, source_height, levels);
  if (static_cast<int>(details.size()) != levels) {
    throw std::invalid_argument("pyramid detail level count mismatch");
  }
  if (top_ll.width() != (source_width >> levels) || top_ll.height() != (source_height >> levels)) {
    throw std::invalid_argument("top LL plane has the wrong size");
  }
  for (int k = 1; k <= levels; ++k) {
    const auto& d = details[static_cast<std::size_t>(k - 1)];
    const int w = source_width >> k;
    const int h = source_height >> k;
    for (const auto* p : {&d.lh, &d.hl, &d.hh}) {
      if (p->width() != w || p->height() != h) {
        throw std::invalid_argument("detail plane at level " + std::to_string(k) +
                                    " has the wrong size");
      }
    }
  }
}

}  // namespace crowdshare::wavelet
