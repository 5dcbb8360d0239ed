// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crowdshare/plane.hpp"
#include "crowdshare/wavelet.hpp"

namespace crowdshare::saliency {

/// Axis-aligned salient object. `level` is the head start k' in wavelet
/// levels; pixels inside the box get spatial saliency 4^k' + 1.
struct SalientBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  int level = 1;
  std::string label;

  friend bool operator==(const SalientBox&, const SalientBox&) = default;
};

struct SaliencyAnnotation {
  std::vector<SalientBox> boxes;

  /// Labels in annotation order.
  std::vector<std::string> labels() const;

  /// Checks bounds, positive sizes, level >= 1 and label uniqueness.
  void validate(int width, int height) const;

  friend bool operator==(const SaliencyAnnotation&, const SaliencyAnnotation&) = default;
};

using LabelSet = std::set<std::string>;
using SaliencyGrid = BasicPlane<std::int64_t>;
using SaliencyPyramid = wavelet::BasicPyramid<std::int64_t>;

constexpr std::int64_t kBackgroundSaliency = 1;

/// 4^level + 1.
std::int64_t box_saliency(int level);

/// Spatial saliency map. Background is 1, overlapping boxes take the
/// maximum, and boxes whose label is outside `selected` (when given) stay
/// background.
SaliencyGrid rasterize_saliency(const SaliencyAnnotation& annotation, int width, int height,
                                int levels, const std::optional<LabelSet>& selected = std::nullopt);

/// LL saliency chain: element 0 is the spatial map, element k is the sum of
/// each 2×2 block of element k-1.
std::vector<SaliencyGrid> wavelet_saliency(const SaliencyGrid& spatial, int levels);

/// Copies each level's LL saliency onto its LH/HL/HH bands.
SaliencyPyramid replicate_bands(const std::vector<SaliencyGrid>& chain);

/// Transmission order: saliency descending, ties broken coarse level first,
/// then LL < LH < HL < HH, then row-major.
std::vector<wavelet::CoefficientAddress> order_coefficients(const SaliencyPyramid& saliency);

/// rasterize → wavelet_saliency → replicate_bands → order_coefficients.
std::vector<wavelet::CoefficientAddress> transmission_order(
    const SaliencyAnnotation& annotation, int width, int height, int levels,
    const std::optional<LabelSet>& selected = std::nullopt);

/// Annotation sidecar: JSON array of {label, x, y, w, h, level}.
SaliencyAnnotation parse_annotation_json(const std::string& text);
std::string annotation_to_json(const SaliencyAnnotation& annotation);
SaliencyAnnotation read_annotation_file(const std::string& path);

}  // namespace crowdshare::saliency
