// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <string>

#include "crowdshare/imaging.hpp"
#include "test_support.hpp"

namespace crowdshare::imaging {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

TEST(LoadImage, AsciiGray) {
  const auto img = load_image(bytes_of("P2 2 2 255 0 64 128 255"));
  ASSERT_EQ(img.color_space, ColorSpace::Gray);
  ASSERT_EQ(img.width, 2);
  ASSERT_EQ(img.height, 2);
  EXPECT_EQ(img.planes[0].at(0, 0), 0);
  EXPECT_EQ(img.planes[0].at(1, 0), 64);
  EXPECT_EQ(img.planes[0].at(0, 1), 128);
  EXPECT_EQ(img.planes[0].at(1, 1), 255);
}

TEST(LoadImage, AsciiColorSinglePixel) {
  const auto img = load_image(bytes_of("P3\n# comment\n1 1\n255\n10 20 30\n"));
  ASSERT_EQ(img.color_space, ColorSpace::RGB);
  EXPECT_EQ(img.planes[0][0], 10);
  EXPECT_EQ(img.planes[1][0], 20);
  EXPECT_EQ(img.planes[2][0], 30);
}

TEST(LoadImage, DistinctErrors) {
  auto kind_of = [](const std::string& text) {
    try {
      load_image(bytes_of(text));
    } catch (const PnmError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for: " << text;
    return PnmErrorKind::MalformedHeader;
  };
  EXPECT_EQ(kind_of("P2 4 4 255 1 2 3 4 5 6 7 8"), PnmErrorKind::TruncatedPayload);
  EXPECT_EQ(kind_of("P5 4 4 255\n12345678"), PnmErrorKind::TruncatedPayload);
  EXPECT_EQ(kind_of("P2 2 2 65535 0 0 0 0"), PnmErrorKind::UnsupportedMaxval);
  EXPECT_EQ(kind_of("P7 2 2 255"), PnmErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("P2 2"), PnmErrorKind::MalformedHeader);
  EXPECT_EQ(kind_of("P2 2 2 255 0 x 0 0"), PnmErrorKind::MalformedHeader);
}

TEST(SaveImage, BinaryRoundTripIsByteIdentical) {
  const auto img = testing::synthetic_photo(13, 9, 4, true);
  const auto bytes = save_image(img);
  const auto back = load_image(bytes);
  EXPECT_EQ(save_image(back), bytes);
  EXPECT_EQ(back.planes, img.planes);

  const auto ascii = save_image(img, PnmEncoding::Ascii);
  EXPECT_EQ(load_image(ascii).planes, img.planes);
}

TEST(SaveImage, ClampsAndRounds) {
  auto img = RasterImage::blank(3, 1, ColorSpace::Gray);
  img.planes[0][0] = 255.7;
  img.planes[0][1] = -4.0;
  img.planes[0][2] = 17.5;
  const auto back = load_image(save_image(img));
  EXPECT_EQ(back.planes[0][0], 255);
  EXPECT_EQ(back.planes[0][1], 0);
  EXPECT_EQ(back.planes[0][2], 18);
}

TEST(SaveImage, RejectsYcbcr) {
  auto img = RasterImage::blank(2, 2, ColorSpace::YCbCr);
  EXPECT_THROW(save_image(img), std::invalid_argument);
}

TEST(ColorConvert, FixedPoints) {
  auto img = RasterImage::blank(2, 1, ColorSpace::RGB, 128.0);
  for (auto& p : img.planes) p[1] = 0.0;
  const auto ycc = color_convert(img, ColorDirection::RgbToYcbcr);
  EXPECT_EQ(ycc.color_space, ColorSpace::YCbCr);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(ycc.planes[static_cast<std::size_t>(c)][0], 128.0, 1e-12);
  EXPECT_NEAR(ycc.planes[0][1], 0.0, 1e-12);
  EXPECT_NEAR(ycc.planes[1][1], 128.0, 1e-12);
  EXPECT_NEAR(ycc.planes[2][1], 128.0, 1e-12);
}

TEST(ColorConvert, InverseWithinTolerance) {
  auto img = RasterImage::blank(32, 32, ColorSpace::RGB);
  for (int c = 0; c < 3; ++c) img.planes[static_cast<std::size_t>(c)] = testing::random_plane(32, 32, 10 + c);
  const auto back = color_convert(color_convert(img, ColorDirection::RgbToYcbcr),
                                  ColorDirection::YcbcrToRgb);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < back.planes[0].size(); ++i) {
      worst = std::max(worst, std::abs(back.planes[static_cast<std::size_t>(c)][i] -
                                       img.planes[static_cast<std::size_t>(c)][i]));
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(ColorConvert, WrongSourceRejected) {
  EXPECT_THROW(color_convert(RasterImage::blank(2, 2, ColorSpace::Gray), ColorDirection::RgbToYcbcr),
               std::invalid_argument);
  EXPECT_THROW(color_convert(RasterImage::blank(2, 2, ColorSpace::RGB), ColorDirection::YcbcrToRgb),
               std::invalid_argument);
}

TEST(PadToDyadic, RoundsUpAndRecordsOriginal) {
  const auto img = testing::synthetic_photo(5, 7, 1, false);
  const auto padded = pad_to_dyadic(img, 2);
  EXPECT_EQ(padded.width, 8);
  EXPECT_EQ(padded.height, 8);
  EXPECT_EQ(padded.original_width, 5);
  EXPECT_EQ(padded.original_height, 7);
  // Every padded pixel equals its nearest in-bounds pixel.
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      EXPECT_EQ(padded.planes[0].at(x, y), img.planes[0].at(std::min(x, 4), std::min(y, 6)));
    }
  }
  const auto again = pad_to_dyadic(padded, 2);
  EXPECT_EQ(again.planes, padded.planes);
  EXPECT_EQ(again.original_width, 5);
}

TEST(PadToDyadic, IdentityAndSinglePixel) {
  const auto img = testing::synthetic_photo(8, 8, 2, true);
  const auto same = pad_to_dyadic(img, 3);
  EXPECT_EQ(same.planes, img.planes);
  EXPECT_EQ(same.width, 8);

  auto one = RasterImage::blank(1, 1, ColorSpace::Gray, 42.0);
  const auto two = pad_to_dyadic(one, 1);
  ASSERT_EQ(two.width, 2);
  for (double v : two.planes[0]) EXPECT_EQ(v, 42.0);
  EXPECT_THROW(pad_to_dyadic(one, 0), std::invalid_argument);
}

TEST(Crop, RestoresOriginalWindow) {
  const auto img = testing::synthetic_photo(5, 7, 3, true);
  const auto back = crop(pad_to_dyadic(img, 3), 5, 7);
  EXPECT_EQ(back.planes, img.planes);
}

}  // namespace
}  // namespace crowdshare::imaging
