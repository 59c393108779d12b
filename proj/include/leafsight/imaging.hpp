#ifndef LEAFSIGHT_IMAGING_HPP
#define LEAFSIGHT_IMAGING_HPP

#include "leafsight/image.hpp"

namespace leafsight {

// Rescales each channel so its mean matches the cross-channel mean of the
// input (color-cast removal). A channel whose mean is zero is passed
// through unchanged. Values are rounded half-up and clamped to [0, 255].
RgbImage gray_world_normalize(const RgbImage& img);

// Standard hexcone conversion; hue of achromatic pixels is 0 and hue lives
// on the unit interval [0, 1).
HsvImage rgb_to_hsv(const RgbImage& img);

// Luminance 0.299 R + 0.587 G + 0.114 B, rounded half-up.
GrayImage to_grayscale(const RgbImage& img);

// Hue plane scaled to [0, 255] integers (the elevation substrate used by
// the segmentation stage).
GrayImage hue_plane_u8(const HsvImage& img);

// Gaussian-spatial x Gaussian-range weighted mean over the
// (2 radius + 1)^2 window, window-clipped at the image boundary, rounded
// to the nearest integer.
GrayImage bilateral_filter(const GrayImage& img, Scalar spatial_sigma,
                           Scalar range_sigma, int radius);

// Background pixels set to the fill color; the foreground is copied.
RgbImage apply_mask(const RgbImage& img, const BinaryMask& mask,
                    std::uint8_t fill = 0);

}  // namespace leafsight

#endif
