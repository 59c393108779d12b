#ifndef LEAFSIGHT_SEGMENTATION_HPP
#define LEAFSIGHT_SEGMENTATION_HPP

#include <array>
#include <cstdint>

#include "leafsight/image.hpp"

namespace leafsight {

// 256-bin gray-level histogram.
struct Histogram256 {
  std::array<std::uint64_t, 256> counts{};

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  int occupied_levels() const {
    int n = 0;
    for (auto c : counts)
      if (c > 0) ++n;
    return n;
  }
};

Histogram256 histogram(const GrayImage& img);
Histogram256 histogram(const GrayImage& img, const BinaryMask& mask);

// Priority-flood watershed from regional-minimum markers, 8-connected.
// Connected plateaus of equal value with no lower neighbor seed one basin
// each; flooding proceeds in ascending elevation with FIFO order among
// equal elevations. Pixels reached from two or more basins become ridge
// pixels (label 0); basin labels are contiguous from 1 in raster-scan
// order of each marker's first pixel.
LabelMap watershed_segment(const GrayImage& elevation);

// Binary morphology with everything outside the raster treated as
// background. open/close pad internally so results match the
// infinite-plane operators restricted to the raster.
BinaryMask erode(const BinaryMask& mask, const BinaryMask& element);
BinaryMask dilate(const BinaryMask& mask, const BinaryMask& element);
BinaryMask morph_open(const BinaryMask& mask, const BinaryMask& element);
BinaryMask morph_close(const BinaryMask& mask, const BinaryMask& element);
BinaryMask cross3x3();

// Morphological gradient (dilate minus erode) with a 3x3 cross; flat
// regions map to 0 and edges to ridges of the local value range.
GrayImage morph_gradient(const GrayImage& img);

// 8-connected foreground components smaller than min_px are removed.
BinaryMask drop_small_components(const BinaryMask& mask, Index min_px);

// Labels 8-connected foreground components 1..n (0 = background).
MatI32 connected_components(const BinaryMask& mask, std::int32_t* count = nullptr);

struct SegmentationParams {
  Scalar bilateral_spatial_sigma = 3.0;
  Scalar bilateral_range_sigma = 25.0;
  int bilateral_radius = 5;
  Index min_component_px = 16;
  // A basin is kept when its mean saturation exceeds the image's median
  // saturation and it occupies less than this fraction of the border.
  Scalar border_touch_fraction = 0.25;
};

// Background removal: gray-world normalize, convert to HSV, bilateral-
// filter the hue plane, run the watershed on the hue gradient, keep
// saturated non-border basins, then open+close with a 3x3 cross and drop
// components below min_component_px. Throws NoLeafError (carrying the
// watershed basin count) when nothing survives.
BinaryMask leaf_mask(const RgbImage& img, const SegmentationParams& params = {});

// Threshold maximizing the between-class variance with class 0 = levels
// <= t; ties resolve to the floor of the mean of all maximizing t.
// Requires at least two occupied levels.
int otsu_threshold(const Histogram256& hist);

// Between-class variance at threshold t (class 0 = levels <= t).
Scalar otsu_objective(const Histogram256& hist, int t);

enum class LesionPolarity { Dark, Bright };

// Otsu threshold over the leaf-pixel histogram; the side whose mean gray
// level matches the polarity (dark by default) is the lesion, intersected
// with the leaf mask.
BinaryMask diseased_region_mask(const GrayImage& gray, const BinaryMask& leaf,
                                LesionPolarity polarity = LesionPolarity::Dark);

}  // namespace leafsight

#endif
