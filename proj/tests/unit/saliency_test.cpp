// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <tuple>

#include "crowdshare/saliency.hpp"
#include "test_support.hpp"

namespace crowdshare::saliency {
namespace {

using wavelet::Band;
using wavelet::CoefficientAddress;

SaliencyAnnotation one_box(int x, int y, int w, int h, int level, std::string label = "obj") {
  return {{SalientBox{x, y, w, h, level, std::move(label)}}};
}

// Saliency of a coefficient computed straight from the spatial map: the sum
// over its 2^k x 2^k footprint.
std::int64_t footprint_sum(const SaliencyGrid& spatial, const CoefficientAddress& a) {
  const int side = 1 << a.level;
  std::int64_t s = 0;
  for (int y = a.row * side; y < (a.row + 1) * side; ++y) {
    for (int x = a.col * side; x < (a.col + 1) * side; ++x) s += spatial.at(x, y);
  }
  return s;
}

TEST(Rasterize, BackgroundAndMax) {
  SaliencyAnnotation ann{{SalientBox{0, 0, 4, 4, 1, "a"}, SalientBox{2, 2, 4, 4, 2, "b"}}};
  const auto grid = rasterize_saliency(ann, 8, 8, 2);
  EXPECT_EQ(grid.at(0, 0), 5);
  EXPECT_EQ(grid.at(3, 3), 17);
  EXPECT_EQ(grid.at(5, 5), 17);
  EXPECT_EQ(grid.at(7, 0), 1);
}

TEST(Rasterize, UnselectedLabelsStayBackground) {
  SaliencyAnnotation ann{{SalientBox{0, 0, 2, 2, 1, "a"}, SalientBox{4, 4, 2, 2, 1, "b"}}};
  const auto grid = rasterize_saliency(ann, 8, 8, 2, LabelSet{"b"});
  EXPECT_EQ(grid.at(0, 0), 1);
  EXPECT_EQ(grid.at(4, 4), 5);
}

TEST(WaveletSaliency, SinglePixelChain) {
  const auto chain = wavelet_saliency(rasterize_saliency(one_box(0, 0, 1, 1, 1), 2, 2, 1), 1);
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_EQ(chain[1].at(0, 0), 8);
}

TEST(WaveletSaliency, Conservation) {
  SaliencyAnnotation ann{{SalientBox{3, 5, 17, 9, 2, "a"}, SalientBox{20, 1, 6, 20, 3, "b"}}};
  const auto spatial = rasterize_saliency(ann, 32, 32, 3);
  std::int64_t total = 0;
  for (auto v : spatial) total += v;
  const auto chain = wavelet_saliency(spatial, 3);
  for (const auto& g : chain) {
    std::int64_t s = 0;
    for (auto v : g) s += v;
    EXPECT_EQ(s, total);
  }
}

TEST(WaveletSaliency, UniformImageGivesPowersOfFour) {
  const auto chain = wavelet_saliency(SaliencyGrid(16, 16, 1), 3);
  for (int k = 0; k <= 3; ++k) {
    for (auto v : chain[static_cast<std::size_t>(k)]) EXPECT_EQ(v, std::int64_t{1} << (2 * k));
  }
}

TEST(WaveletSaliency, DeepLevelsStayExact) {
  // 4^12 + 1 per pixel summed over 2^12 x 2^12 pixels at level 12 does not fit
  // in 32 bits; the chain must carry it exactly.
  const std::int64_t s = box_saliency(12);
  EXPECT_EQ(s, (std::int64_t{1} << 24) + 1);
  SaliencyGrid spatial(64, 64, s);
  const auto chain = wavelet_saliency(spatial, 6);
  EXPECT_EQ(chain[6].at(0, 0), s * 4096);
}

TEST(OrderCoefficients, MatchesPairwiseOracle) {
  SaliencyAnnotation ann{{SalientBox{2, 3, 9, 7, 1, "a"}, SalientBox{10, 8, 5, 6, 2, "b"},
                          SalientBox{0, 12, 16, 4, 1, "c"}}};
  const int w = 16, h = 16, K = 3;
  const auto spatial = rasterize_saliency(ann, w, h, K);
  const auto order = transmission_order(ann, w, h, K);
  ASSERT_EQ(order.size(), static_cast<std::size_t>(w * h));

  std::set<std::tuple<int, int, int, int>> seen;
  for (const auto& a : order) seen.insert({a.level, static_cast<int>(a.band), a.row, a.col});
  EXPECT_EQ(seen.size(), order.size());

  auto key = [&](const CoefficientAddress& a) {
    return std::make_tuple(-footprint_sum(spatial, a), -static_cast<int>(a.level),
                           static_cast<int>(a.band), static_cast<int>(a.row),
                           static_cast<int>(a.col));
  };
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    EXPECT_LT(key(order[i]), key(order[i + 1])) << "position " << i;
  }
}

TEST(OrderCoefficients, NoAnnotationIsRasterOrder) {
  const auto order = transmission_order({}, 32, 16, 3);
  EXPECT_EQ(order, wavelet::raster_order(32, 16, 3));
}

TEST(OrderCoefficients, BoxCoefficientsLeadWithinLevel) {
  const auto order = transmission_order(one_box(0, 0, 4, 4, 2), 16, 16, 2);
  // Coarsest LL covering the box comes first.
  EXPECT_EQ(order[0], (CoefficientAddress{2, Band::LL, 0, 0}));
  EXPECT_EQ(order[1], (CoefficientAddress{2, Band::LH, 0, 0}));
  EXPECT_EQ(order[2], (CoefficientAddress{2, Band::HL, 0, 0}));
  EXPECT_EQ(order[3], (CoefficientAddress{2, Band::HH, 0, 0}));
}

TEST(Annotation, Validation) {
  EXPECT_NO_THROW(one_box(0, 0, 8, 8, 1).validate(8, 8));
  EXPECT_THROW(one_box(4, 0, 8, 8, 1).validate(8, 8), std::out_of_range);
  EXPECT_THROW(one_box(0, 0, 0, 8, 1).validate(8, 8), std::logic_error);
  EXPECT_THROW(one_box(0, 0, 2, 2, 0).validate(8, 8), std::invalid_argument);
  EXPECT_THROW(one_box(0, 0, 2, 2, 1, "").validate(8, 8), std::invalid_argument);
  SaliencyAnnotation dup{{SalientBox{0, 0, 1, 1, 1, "a"}, SalientBox{2, 2, 1, 1, 1, "a"}}};
  EXPECT_THROW(dup.validate(8, 8), std::invalid_argument);
}

TEST(Annotation, JsonRoundTrip) {
  SaliencyAnnotation ann{{SalientBox{1, 2, 3, 4, 2, "car"}, SalientBox{5, 6, 7, 8, 1, "dog"}}};
  EXPECT_EQ(parse_annotation_json(annotation_to_json(ann)), ann);
  const auto parsed =
      parse_annotation_json(R"([{"label":"x","x":0,"y":0,"w":2,"h":2,"level":3}])");
  ASSERT_EQ(parsed.boxes.size(), 1u);
  EXPECT_EQ(parsed.boxes[0].level, 3);
  EXPECT_ANY_THROW(parse_annotation_json(R"([{"label":"x","x":0}])"));
  EXPECT_ANY_THROW(parse_annotation_json("{"));
}

}  // namespace
}  // namespace crowdshare::saliency
