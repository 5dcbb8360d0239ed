// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "crowdshare/codec.hpp"
#include "test_support.hpp"

namespace crowdshare::codec {
namespace {

using wavelet::Band;

saliency::SaliencyAnnotation sample_boxes() {
  return {{saliency::SalientBox{8, 8, 20, 16, 2, "face"},
           saliency::SalientBox{40, 30, 12, 12, 1, "cup"}}};
}

TEST(Quantizer, ErrorBoundedByHalfStep) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto pyr = wavelet::haar_forward(testing::random_plane(32, 32, seed, -500, 900), 3);
    const auto q = quantize_subbands(pyr);
    for (const auto& a : wavelet::raster_order(32, 32, 3)) {
      const auto& p = q.params(a.level, a.band);
      const double back = dequantize_value(p, q.codes.at(a));
      EXPECT_LE(std::abs(back - pyr.at(a)), p.scale / 2.0 + 1e-9);
    }
  }
}

TEST(Quantizer, ConstantBandIsExact) {
  const auto pyr = wavelet::haar_forward(Plane(16, 16, 77.0), 2);
  const auto q = quantize_subbands(pyr);
  for (const auto& b : q.bands) EXPECT_EQ(b.scale, 0.0f);
  const auto order = wavelet::raster_order(16, 16, 2);
  const auto back = dequantize_subbands(q, order);
  EXPECT_EQ(back.top_ll.at(0, 0), pyr.top_ll.at(0, 0));
}

TEST(Quantizer, MissingCoefficientsFilled) {
  const auto pyr = wavelet::haar_forward(testing::random_plane(8, 8, 1), 1);
  const auto q = quantize_subbands(pyr);
  const auto back = dequantize_subbands(q, {});
  const auto& ll = q.params(1, Band::LL);
  for (double v : back.top_ll) EXPECT_EQ(v, static_cast<double>(ll.mean));
  for (double v : back.details[0].hh) EXPECT_EQ(v, 0.0);
}

TEST(Quantizer, BandIndexLayout) {
  EXPECT_EQ(band_index(3, 3, Band::LL), 0);
  EXPECT_EQ(band_index(3, 3, Band::LH), 1);
  EXPECT_EQ(band_index(3, 3, Band::HH), 3);
  EXPECT_EQ(band_index(3, 1, Band::HH), 9);
  EXPECT_EQ(bands_per_channel(3), 10);
}

TEST(Selection, PrefixLength) {
  EXPECT_EQ(prefix_length(100, 1.0), 100u);
  EXPECT_EQ(prefix_length(100, 0.05), 5u);
  EXPECT_EQ(prefix_length(100, 0.051), 6u);
  EXPECT_EQ(prefix_length(100, 1e-9), 1u);
  EXPECT_EQ(prefix_length(10, 0.3), 3u);  // 0.3 * 10 is 3.0000000000000004
  EXPECT_THROW(prefix_length(100, 0.0), std::invalid_argument);
  EXPECT_THROW(prefix_length(100, 1.5), std::invalid_argument);
}

TEST(Bitstream, HeaderRoundTrip) {
  Bitstream b;
  b.header.width = 64;
  b.header.height = 32;
  b.header.original_width = 61;
  b.header.original_height = 30;
  b.header.levels = 2;
  b.header.channels = 1;
  b.header.boxes = {{1, 2, 3, 4, 2}};
  for (int i = 0; i < 7; ++i) b.header.bands.push_back({static_cast<float>(i) * 1.5f, 0.25f});
  b.header.selected_count = 99;
  b.payload = {9, 8, 7};
  const auto bytes = serialize_bitstream(b);
  EXPECT_EQ(bytes[0], 'S');
  EXPECT_EQ(bytes[3], 'C');
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 64);  // width, little-endian
  EXPECT_EQ(parse_bitstream(bytes), b);
}

TEST(Bitstream, RejectsCorruptHeaders) {
  const auto img = testing::synthetic_photo(32, 32, 3, false);
  auto bytes = serialize_bitstream(encode_image(img, {}, {}));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(parse_bitstream(bad_magic), CodecError);
  auto bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(parse_bitstream(bad_version), CodecError);
  EXPECT_THROW(parse_bitstream(std::span(bytes).first(20)), CodecError);
}

TEST(Codec, FullBudgetIsNearLossless) {
  for (bool color : {false, true}) {
    const auto img = testing::synthetic_photo(64, 64, 7, color);
    const auto ann = sample_boxes();
    const auto bytes = serialize_bitstream(encode_image(img, ann, {3, 1.0, {}}));
    const auto out = decode_image(parse_bitstream(bytes));
    ASSERT_EQ(out.width, 64);
    ASSERT_EQ(out.height, 64);
    EXPECT_EQ(out.color_space, img.color_space);
    // Color loses the finest chroma detail on top of quantization.
    EXPECT_GE(quality_metrics(img, out).psnr_db, color ? 34.0 : 40.0);
  }
}

TEST(Codec, NonDyadicImageCroppedBack) {
  const auto img = testing::synthetic_photo(37, 21, 2, true);
  const auto out = decode_image(encode_image(img, {}, {3, 1.0, {}}));
  EXPECT_EQ(out.width, 37);
  EXPECT_EQ(out.height, 21);
  EXPECT_GE(quality_metrics(img, out).psnr_db, 35.0);
}

TEST(Codec, DeterministicAndOrderAgrees) {
  const auto img = testing::synthetic_photo(64, 64, 8, true);
  const EncoderConfig cfg{3, 0.2, {}};
  const auto a = serialize_bitstream(encode_image(img, sample_boxes(), cfg));
  const auto b = serialize_bitstream(encode_image(img, sample_boxes(), cfg));
  EXPECT_EQ(a, b);
  EXPECT_EQ(decoder_order(parse_bitstream(a).header), encoder_order(img, sample_boxes(), cfg));
}

TEST(Codec, UnselectedBoxesNotTransmitted) {
  const auto img = testing::synthetic_photo(64, 64, 8, false);
  EncoderConfig cfg{3, 0.5, saliency::LabelSet{"cup"}};
  const auto b = encode_image(img, sample_boxes(), cfg);
  ASSERT_EQ(b.header.boxes.size(), 1u);
  EXPECT_EQ(b.header.boxes[0].x, 40);
  EXPECT_EQ(decoder_order(b.header), encoder_order(img, sample_boxes(), cfg));
}

TEST(Codec, SmallerBudgetSmallerFile) {
  const auto img = testing::synthetic_photo(128, 128, 9, true);
  std::size_t last = 0;
  for (double b : {0.05, 0.2, 0.6, 1.0}) {
    const auto size = serialize_bitstream(encode_image(img, sample_boxes(), {3, b, {}})).size();
    EXPECT_GT(size, last);
    last = size;
  }
}

TEST(Codec, EncodeToSizeHitsTarget) {
  const auto img = testing::synthetic_photo(128, 128, 10, true);
  const auto full = serialize_bitstream(encode_image(img, {}, {})).size();
  const std::size_t target = full / 3;
  const auto size = serialize_bitstream(encode_to_size(img, {}, {}, target)).size();
  EXPECT_LE(size, target + target / 20);
  EXPECT_GE(size, target - target / 20);
}

TEST(Codec, TruncatedPayloadRejected) {
  const auto img = testing::synthetic_photo(32, 32, 4, false);
  auto bs = encode_image(img, {}, {});
  bs.payload.resize(bs.payload.size() / 2);
  EXPECT_THROW(decode_image(bs), CodecError);
}

TEST(Quality, IdenticalAndKnownMse) {
  const auto img = testing::synthetic_photo(16, 16, 1, false);
  EXPECT_TRUE(std::isinf(quality_metrics(img, img).psnr_db));
  auto shifted = img;
  for (auto& v : shifted.planes[0]) v += 5.0;
  const auto r = quality_metrics(img, shifted);
  EXPECT_DOUBLE_EQ(r.mse, 25.0);
  EXPECT_NEAR(r.psnr_db, 10.0 * std::log10(255.0 * 255.0 / 25.0), 1e-12);
}

TEST(Quality, MaskedEqualsCropped) {
  const auto a = testing::synthetic_photo(40, 30, 5, true);
  const auto b = testing::synthetic_photo(40, 30, 6, true);
  const saliency::SalientBox box{7, 4, 13, 11, 1, "x"};
  const auto mask = box_mask(40, 30, std::span(&box, 1));
  const auto masked = quality_metrics(a, b, &mask);

  auto window = [&](const imaging::RasterImage& img) {
    auto out = imaging::RasterImage::blank(box.w, box.h, img.color_space);
    for (int c = 0; c < img.channels(); ++c) {
      for (int y = 0; y < box.h; ++y) {
        for (int x = 0; x < box.w; ++x) {
          out.planes[static_cast<std::size_t>(c)].at(x, y) =
              img.planes[static_cast<std::size_t>(c)].at(box.x + x, box.y + y);
        }
      }
    }
    return out;
  };
  const auto cropped = quality_metrics(window(a), window(b));
  EXPECT_NEAR(masked.mse, cropped.mse, 1e-9);
  EXPECT_EQ(masked.samples, cropped.samples);
  EXPECT_THROW(quality_metrics(a, testing::synthetic_photo(8, 8, 1, true)), std::invalid_argument);
}

}  // namespace
}  // namespace crowdshare::codec
