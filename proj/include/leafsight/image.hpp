#ifndef LEAFSIGHT_IMAGE_HPP
#define LEAFSIGHT_IMAGE_HPP

#include <array>
#include <cstdint>
#include <string>

#include "leafsight/core.hpp"

namespace leafsight {

// Planar 8-bit RGB raster. Plane coefficient (y, x) is the pixel at
// column x, row y; all planes share one shape.
struct RgbImage {
  MatU8 r, g, b;

  Index width() const { return r.cols(); }
  Index height() const { return r.rows(); }

  static RgbImage zeros(Index width, Index height) {
    RgbImage img;
    img.r = MatU8::Zero(height, width);
    img.g = MatU8::Zero(height, width);
    img.b = MatU8::Zero(height, width);
    return img;
  }

  std::array<std::uint8_t, 3> at(Index x, Index y) const {
    return {r(y, x), g(y, x), b(y, x)};
  }
  void set(Index x, Index y, std::uint8_t rv, std::uint8_t gv, std::uint8_t bv) {
    r(y, x) = rv;
    g(y, x) = gv;
    b(y, x) = bv;
  }

  bool operator==(const RgbImage& o) const {
    return r == o.r && g == o.g && b == o.b;
  }
};

// Single-channel 8-bit raster.
struct GrayImage {
  MatU8 v;

  Index width() const { return v.cols(); }
  Index height() const { return v.rows(); }

  static GrayImage zeros(Index width, Index height) {
    return GrayImage{MatU8::Zero(height, width)};
  }
  static GrayImage constant(Index width, Index height, std::uint8_t value) {
    return GrayImage{MatU8::Constant(height, width, value)};
  }

  bool operator==(const GrayImage& o) const { return v == o.v; }
};

// Hue in [0, 1) (wrapping, 0 for achromatic pixels), saturation and value
// in [0, 1].
struct HsvImage {
  ArrXX h, s, v;

  Index width() const { return h.cols(); }
  Index height() const { return h.rows(); }
};

// Boolean raster; true marks foreground.
struct BinaryMask {
  ArrB m;

  Index width() const { return m.cols(); }
  Index height() const { return m.rows(); }
  Index count() const { return m.count(); }
  bool empty() const { return m.count() == 0; }

  static BinaryMask zeros(Index width, Index height) {
    return BinaryMask{ArrB::Constant(height, width, false)};
  }

  bool operator==(const BinaryMask& o) const { return (m == o.m).all(); }

  // true when every foreground pixel of this mask is foreground in `outer`.
  bool subset_of(const BinaryMask& outer) const {
    return (!m || outer.m).all();
  }
};

// Per-pixel basin labels; 0 marks watershed ridge pixels, basins are
// numbered contiguously from 1.
struct LabelMap {
  MatI32 labels;
  std::int32_t basin_count = 0;

  Index width() const { return labels.cols(); }
  Index height() const { return labels.rows(); }
};

// --- Lossless fixture formats -------------------------------------------
//
// PPM P6 (binary, maxval 255) is the canonical bit-exact image format and
// PBM P4 the mask format. Encoders emit the canonical header layout
// ("P6\n<w> <h>\n255\n"), so encode(decode(f)) == f holds for canonically
// formatted files and decode(encode(img)) == img holds always.

RgbImage decode_ppm(const std::string& bytes);
std::string encode_ppm(const RgbImage& img);

BinaryMask decode_pbm(const std::string& bytes);
// Foreground pixels are written as 1 bits (PBM black).
std::string encode_pbm(const BinaryMask& mask);

RgbImage read_ppm_file(const std::string& path);
void write_ppm_file(const std::string& path, const RgbImage& img);
BinaryMask read_pbm_file(const std::string& path);
void write_pbm_file(const std::string& path, const BinaryMask& mask);

}  // namespace leafsight

#endif
