#include "leafsight/imaging.hpp"

#include <algorithm>
#include <cmath>

namespace leafsight {

RgbImage gray_world_normalize(const RgbImage& img) {
  if (img.width() < 1 || img.height() < 1) throw ParamError("empty image");
  const Scalar mr = img.r.cast<Scalar>().mean();
  const Scalar mg = img.g.cast<Scalar>().mean();
  const Scalar mb = img.b.cast<Scalar>().mean();
  const Scalar cross = (mr + mg + mb) / Scalar(3);

  auto scale_plane = [&](const MatU8& plane, Scalar mean) {
    MatU8 out(plane.rows(), plane.cols());
    if (mean == Scalar(0)) {
      out = plane;  // all-black channel: degenerate case, pass through
      return out;
    }
    const Scalar k = cross / mean;
    for (Index i = 0; i < plane.rows(); ++i)
      for (Index j = 0; j < plane.cols(); ++j)
        out(i, j) = clamp_u8(k * plane(i, j));
    return out;
  };

  RgbImage out;
  out.r = scale_plane(img.r, mr);
  out.g = scale_plane(img.g, mg);
  out.b = scale_plane(img.b, mb);
  return out;
}

HsvImage rgb_to_hsv(const RgbImage& img) {
  HsvImage out;
  out.h = ArrXX::Zero(img.height(), img.width());
  out.s = ArrXX::Zero(img.height(), img.width());
  out.v = ArrXX::Zero(img.height(), img.width());
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      const Scalar r = img.r(y, x) / Scalar(255);
      const Scalar g = img.g(y, x) / Scalar(255);
      const Scalar b = img.b(y, x) / Scalar(255);
      const Scalar mx = std::max({r, g, b});
      const Scalar mn = std::min({r, g, b});
      const Scalar delta = mx - mn;
      Scalar h = 0;
      if (delta > Scalar(0)) {
        if (mx == r)
          h = (g - b) / delta;
        else if (mx == g)
          h = Scalar(2) + (b - r) / delta;
        else
          h = Scalar(4) + (r - g) / delta;
        h /= Scalar(6);
        if (h < Scalar(0)) h += Scalar(1);
        if (h >= Scalar(1)) h -= Scalar(1);
      }
      out.h(y, x) = h;
      out.s(y, x) = mx > Scalar(0) ? delta / mx : Scalar(0);
      out.v(y, x) = mx;
    }
  }
  return out;
}

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out = GrayImage::zeros(img.width(), img.height());
  for (Index y = 0; y < img.height(); ++y)
    for (Index x = 0; x < img.width(); ++x)
      out.v(y, x) = clamp_u8(Scalar(0.299) * img.r(y, x) +
                             Scalar(0.587) * img.g(y, x) +
                             Scalar(0.114) * img.b(y, x));
  return out;
}

GrayImage hue_plane_u8(const HsvImage& img) {
  GrayImage out = GrayImage::zeros(img.width(), img.height());
  for (Index y = 0; y < img.height(); ++y)
    for (Index x = 0; x < img.width(); ++x)
      out.v(y, x) = clamp_u8(img.h(y, x) * Scalar(255));
  return out;
}

GrayImage bilateral_filter(const GrayImage& img, Scalar spatial_sigma,
                           Scalar range_sigma, int radius) {
  if (spatial_sigma <= 0) throw ParamError("bilateral_filter: spatial_sigma must be > 0");
  if (range_sigma <= 0) throw ParamError("bilateral_filter: range_sigma must be > 0");
  if (radius < 1) throw ParamError("bilateral_filter: radius must be >= 1");

  const Scalar inv2ss = Scalar(1) / (2 * spatial_sigma * spatial_sigma);
  const Scalar inv2rs = Scalar(1) / (2 * range_sigma * range_sigma);

  // Spatial kernel is separable in (dx, dy) but the range term is not;
  // precompute the spatial table only.
  const int side = 2 * radius + 1;
  ArrXX spatial(side, side);
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      spatial(dy + radius, dx + radius) =
          std::exp(-(Scalar(dx) * dx + Scalar(dy) * dy) * inv2ss);

  GrayImage out = GrayImage::zeros(img.width(), img.height());
  for (Index y = 0; y < img.height(); ++y) {
    for (Index x = 0; x < img.width(); ++x) {
      const Scalar center = img.v(y, x);
      Scalar wsum = 0, vsum = 0;
      const Index y0 = std::max<Index>(0, y - radius);
      const Index y1 = std::min<Index>(img.height() - 1, y + radius);
      const Index x0 = std::max<Index>(0, x - radius);
      const Index x1 = std::min<Index>(img.width() - 1, x + radius);
      for (Index ny = y0; ny <= y1; ++ny) {
        for (Index nx = x0; nx <= x1; ++nx) {
          const Scalar v = img.v(ny, nx);
          const Scalar d = v - center;
          const Scalar w = spatial(ny - y + radius, nx - x + radius) *
                           std::exp(-d * d * inv2rs);
          wsum += w;
          vsum += w * v;
        }
      }
      out.v(y, x) = clamp_u8(vsum / wsum);
    }
  }
  return out;
}

RgbImage apply_mask(const RgbImage& img, const BinaryMask& mask, std::uint8_t fill) {
  if (mask.width() != img.width() || mask.height() != img.height())
    throw ParamError("apply_mask: mask dimensions do not match image");
  RgbImage out = img;
  for (Index y = 0; y < img.height(); ++y)
    for (Index x = 0; x < img.width(); ++x)
      if (!mask.m(y, x)) out.set(x, y, fill, fill, fill);
  return out;
}

}  // namespace leafsight
