// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "crowdshare/saliency.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace crowdshare::saliency {

using wavelet::Band;
using wavelet::CoefficientAddress;

namespace {

// Keeps 4^(level + K) inside int64 for every level of the chain.
constexpr int kMaxLevelBudget = 30;

}  // namespace

std::vector<std::string> SaliencyAnnotation::labels() const {
  std::vector<std::string> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) out.push_back(b.label);
  return out;
}

void SaliencyAnnotation::validate(int width, int height) const {
  LabelSet seen;
  for (const auto& b : boxes) {
    if (b.label.empty()) throw std::invalid_argument("salient box label must be non-empty");
    if (!seen.insert(b.label).second) {
      throw std::invalid_argument("duplicate salient box label '" + b.label + "'");
    }
    if (b.level < 1) {
      throw std::invalid_argument("box '" + b.label + "' has saliency level < 1");
    }
    if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 ||
        static_cast<long>(b.x) + b.w > width || static_cast<long>(b.y) + b.h > height) {
      throw std::out_of_range("box '" + b.label + "' lies outside the " + std::to_string(width) +
                              "x" + std::to_string(height) + " image");
    }
  }
}

std::int64_t box_saliency(int level) {
  if (level < 1 || level >= kMaxLevelBudget) {
    throw std::invalid_argument("saliency level out of range");
  }
  return (std::int64_t{1} << (2 * level)) + 1;
}

SaliencyGrid rasterize_saliency(const SaliencyAnnotation& annotation, int width, int height,
                                int levels, const std::optional<LabelSet>& selected) {
  wavelet::require_dyadic(width, height, levels);
  annotation.validate(width, height);

  SaliencyGrid grid(width, height, kBackgroundSaliency);
  for (const auto& b : annotation.boxes) {
    if (selected && !selected->contains(b.label)) continue;
    if (b.level + levels > kMaxLevelBudget) {
      throw std::invalid_argument("box '" + b.label + "' level too large for " +
                                  std::to_string(levels) + " wavelet levels");
    }
    const std::int64_t value = box_saliency(b.level);
    for (int y = b.y; y < b.y + b.h; ++y) {
      for (int x = b.x; x < b.x + b.w; ++x) {
        grid.at(x, y) = std::max(grid.at(x, y), value);
      }
    }
  }
  return grid;
}

std::vector<SaliencyGrid> wavelet_saliency(const SaliencyGrid& spatial, int levels) {
  wavelet::require_dyadic(spatial.width(), spatial.height(), levels);
  std::vector<SaliencyGrid> chain;
  chain.reserve(static_cast<std::size_t>(levels) + 1);
  chain.push_back(spatial);
  for (int k = 1; k <= levels; ++k) {
    const auto& prev = chain.back();
    SaliencyGrid next(prev.width() / 2, prev.height() / 2);
    for (int y = 0; y < next.height(); ++y) {
      for (int x = 0; x < next.width(); ++x) {
        next.at(x, y) = prev.at(2 * x, 2 * y) + prev.at(2 * x + 1, 2 * y) +
                        prev.at(2 * x, 2 * y + 1) + prev.at(2 * x + 1, 2 * y + 1);
      }
    }
    chain.push_back(std::move(next));
  }
  return chain;
}

SaliencyPyramid replicate_bands(const std::vector<SaliencyGrid>& chain) {
  if (chain.size() < 2) throw std::invalid_argument("saliency chain needs at least one level");
  const int levels = static_cast<int>(chain.size()) - 1;
  const auto& base = chain.front();
  auto pyramid = SaliencyPyramid::zeros(base.width(), base.height(), levels);
  for (int k = 1; k <= levels; ++k) {
    const auto& ll = chain[static_cast<std::size_t>(k)];
    if (ll.width() != base.width() >> k || ll.height() != base.height() >> k) {
      throw std::invalid_argument("saliency chain level " + std::to_string(k) +
                                  " has the wrong size");
    }
    auto& d = pyramid.details[static_cast<std::size_t>(k - 1)];
    d.lh = ll;
    d.hl = ll;
    d.hh = ll;
  }
  pyramid.top_ll = chain.back();
  return pyramid;
}

std::vector<CoefficientAddress> order_coefficients(const SaliencyPyramid& saliency) {
  saliency.validate();
  // raster_order is already the tie-break order, so a stable sort on
  // saliency alone yields the full total order.
  auto order = wavelet::raster_order(saliency.source_width, saliency.source_height, saliency.levels);
  std::vector<std::int64_t> key(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) key[i] = saliency.at(order[i]);

  std::vector<std::uint32_t> idx(order.size());
  std::iota(idx.begin(), idx.end(), 0u);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key[a] > key[b]; });

  std::vector<CoefficientAddress> sorted;
  sorted.reserve(order.size());
  for (auto i : idx) sorted.push_back(order[i]);
  return sorted;
}

std::vector<CoefficientAddress> transmission_order(const SaliencyAnnotation& annotation, int width,
                                                   int height, int levels,
                                                   const std::optional<LabelSet>& selected) {
  const auto spatial = rasterize_saliency(annotation, width, height, levels, selected);
  return order_coefficients(replicate_bands(wavelet_saliency(spatial, levels)));
}

}  // namespace crowdshare::saliency
