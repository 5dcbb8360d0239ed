// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <string>

#include "crowdshare/imaging.hpp"

namespace crowdshare::imaging {

namespace {

class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Reads an unsigned decimal token; nullopt when none is present.
  std::optional<long> number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) return std::nullopt;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) return std::nullopt;
      ++pos_;
    }
    return value;
  }

  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  std::size_t position() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::uint8_t peek() const noexcept { return bytes_[pos_]; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(PnmErrorKind kind, const std::string& what) {
  throw PnmError(kind, what);
}

}  // namespace

RasterImage load_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    fail(PnmErrorKind::MalformedHeader, "missing PNM magic");
  }
  const char variant = static_cast<char>(bytes[1]);
  if (variant != '2' && variant != '3' && variant != '5' && variant != '6') {
    fail(PnmErrorKind::MalformedHeader, std::string("unsupported PNM variant P") + variant);
  }
  const bool color = variant == '3' || variant == '6';
  const bool binary = variant == '5' || variant == '6';

  PnmReader reader(bytes);
  reader.advance(2);
  if (!reader.at_end() && !std::isspace(reader.peek()) && reader.peek() != '#') {
    fail(PnmErrorKind::MalformedHeader, "garbage after PNM magic");
  }
  const auto width = reader.number();
  const auto height = reader.number();
  const auto maxval = reader.number();
  if (!width || !height || !maxval) {
    fail(PnmErrorKind::MalformedHeader, "incomplete PNM header");
  }
  if (*width <= 0 || *height <= 0) {
    fail(PnmErrorKind::MalformedHeader, "PNM dimensions must be positive");
  }
  if (*maxval != 255) {
    fail(PnmErrorKind::UnsupportedMaxval,
         "only maxval 255 is supported, got " + std::to_string(*maxval));
  }

  RasterImage image = RasterImage::blank(static_cast<int>(*width), static_cast<int>(*height),
                                         color ? ColorSpace::RGB : ColorSpace::Gray);
  const int channels = image.channels();
  const std::size_t pixels = static_cast<std::size_t>(*width) * static_cast<std::size_t>(*height);
  const std::size_t samples = pixels * static_cast<std::size_t>(channels);

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (reader.at_end() || !std::isspace(reader.peek())) {
      fail(PnmErrorKind::TruncatedPayload, "missing raster after PNM header");
    }
    reader.advance(1);
    if (reader.remaining() < samples) {
      fail(PnmErrorKind::TruncatedPayload,
           "PNM raster truncated: expected " + std::to_string(samples) + " bytes, found " +
               std::to_string(reader.remaining()));
    }
    const std::size_t base = reader.position();
    for (std::size_t i = 0; i < pixels; ++i) {
      for (int c = 0; c < channels; ++c) {
        image.planes[static_cast<std::size_t>(c)][i] =
            bytes[base + i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)];
      }
    }
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      for (int c = 0; c < channels; ++c) {
        const auto value = reader.number();
        if (!value) {
          reader.skip_space_and_comments();
          if (reader.at_end()) {
            fail(PnmErrorKind::TruncatedPayload,
                 "PNM raster truncated after " +
                     std::to_string(i * static_cast<std::size_t>(channels) +
                                    static_cast<std::size_t>(c)) +
                     " of " + std::to_string(samples) + " samples");
          }
          fail(PnmErrorKind::MalformedHeader, "non-numeric sample in ASCII PNM raster");
        }
        if (*value > 255) {
          fail(PnmErrorKind::MalformedHeader, "sample exceeds maxval");
        }
        image.planes[static_cast<std::size_t>(c)][i] = static_cast<double>(*value);
      }
    }
  }
  return image;
}

std::vector<std::uint8_t> save_image(const RasterImage& image, PnmEncoding encoding) {
  if (image.color_space == ColorSpace::YCbCr) {
    throw std::invalid_argument("save_image: convert YCbCr to RGB before writing");
  }
  image.validate();
  const bool color = image.color_space == ColorSpace::RGB;
  const bool binary = encoding == PnmEncoding::Binary;
  const char* magic = color ? (binary ? "P6" : "P3") : (binary ? "P5" : "P2");

  std::string header = std::string(magic) + "\n" + std::to_string(image.width) + " " +
                       std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t pixels = image.planes[0].size();
  if (binary) {
    out.reserve(out.size() + pixels * image.planes.size());
    for (std::size_t i = 0; i < pixels; ++i) {
      for (const auto& plane : image.planes) out.push_back(to_byte(plane[i]));
    }
  } else {
    std::string body;
    for (std::size_t i = 0; i < pixels; ++i) {
      for (const auto& plane : image.planes) {
        body += std::to_string(to_byte(plane[i]));
        body += ' ';
      }
      if ((i + 1) % static_cast<std::size_t>(image.width) == 0) body.back() = '\n';
    }
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

RasterImage read_image_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_image(bytes);
}

void write_image_file(const std::string& path, const RasterImage& image, PnmEncoding encoding) {
  const auto bytes = save_image(image, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace crowdshare::imaging
