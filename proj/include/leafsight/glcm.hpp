#ifndef LEAFSIGHT_GLCM_HPP
#define LEAFSIGHT_GLCM_HPP

#include <string>
#include <vector>

#include "leafsight/image.hpp"

namespace leafsight {

// Co-occurrence offset in pixels; (dx, dy) = (column, row) displacement.
struct GlcmOffset {
  int dx = 1;
  int dy = 0;
};

// Default distance-1 orientations pooled into one symmetric matrix.
inline std::vector<GlcmOffset> default_glcm_offsets() {
  return {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
}

struct QuantizedImage {
  MatU8 q;  // values 0..levels-1 under the mask, 0 elsewhere
  int levels = 8;

  Index width() const { return q.cols(); }
  Index height() const { return q.rows(); }
};

// Gray-level co-occurrence distribution over Ng levels.
struct Glcm {
  int levels = 8;
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  MatX probs;  // counts / total, sums to 1

  std::uint64_t total() const { return counts.sum(); }
};

// Marginals and entropies derived from a normalized GLCM. Indices are the
// 0-based levels; entropies use the natural logarithm with 0 log 0 = 0.
struct MarginalStats {
  VecX px, py;          // row / column marginals
  Scalar mu_x = 0, mu_y = 0;
  Scalar sigma_x = 0, sigma_y = 0;
  VecX p_sum;   // distribution of i + j, length 2 Ng - 1
  VecX p_diff;  // distribution of |i - j|, length Ng
  Scalar hx = 0, hy = 0;        // marginal entropies
  Scalar hxy = 0;               // joint entropy
  Scalar hxy1 = 0, hxy2 = 0;    // cross entropies against px * py
};

// The 22 co-occurrence texture statistics, in the canonical order used by
// the 29-slot feature vector.
struct TextureFeatures {
  Scalar uniformity = 0;
  Scalar entropy = 0;
  Scalar contrast = 0;
  Scalar dissimilarity = 0;
  Scalar homogeneity = 0;
  Scalar inverse_difference = 0;
  Scalar correlation = 0;
  Scalar autocorrelation = 0;
  Scalar cluster_shade = 0;
  Scalar cluster_prominence = 0;
  Scalar max_probability = 0;
  Scalar sum_of_squares = 0;
  Scalar sum_average = 0;
  Scalar sum_variance = 0;
  Scalar sum_entropy = 0;
  Scalar difference_variance = 0;
  Scalar difference_entropy = 0;
  Scalar imc1 = 0;
  Scalar imc2 = 0;
  Scalar mcc = 0;
  Scalar idn = 0;
  Scalar idmn = 0;

  static const std::vector<std::string>& names();
  VecX to_vector() const;
};

// Per-channel mean and population standard deviation over masked pixels.
struct ColorMoments {
  Scalar mean_r = 0, mean_g = 0, mean_b = 0;
  Scalar std_r = 0, std_g = 0, std_b = 0;

  static const std::vector<std::string>& names();
  VecX to_vector() const;
};

// 29-slot sample: 6 color moments, 22 texture statistics, and the label.
struct FeatureVector {
  VecX values;  // 28 feature values in feature_names() order
  std::string label;

  static constexpr int kSlots = 29;
  int slots() const { return static_cast<int>(values.size()) + 1; }
};

// The 28 feature names, color moments first, in the documented order.
const std::vector<std::string>& feature_names();

// Uniform binning of [0, 255] into `levels` equal-width bins; 255 maps to
// levels - 1. Pixels outside the mask are set to 0.
QuantizedImage quantize(const GrayImage& gray, const BinaryMask& mask, int levels);

// Counts pairs with both endpoints inside the mask, accumulated over all
// offsets; symmetric mode also counts each reversed pair. Throws
// EmptyGlcmError when no pair co-occurs.
Glcm build_glcm(const QuantizedImage& q, const BinaryMask& mask,
                const std::vector<GlcmOffset>& offsets, bool symmetric);

MarginalStats marginal_stats(const Glcm& g);

TextureFeatures texture_features(const Glcm& g, const MarginalStats& m);

ColorMoments color_moments(const RgbImage& img, const BinaryMask& mask);

struct FeatureConfig {
  int gray_levels = 8;
  std::vector<GlcmOffset> offsets = default_glcm_offsets();
  bool symmetric = true;
};

// Color moments over the lesion pixels of the RGB image plus texture
// statistics of the quantized grayscale lesion region.
FeatureVector extract_feature_vector(const RgbImage& img, const BinaryMask& leaf,
                                     const BinaryMask& lesion,
                                     const FeatureConfig& cfg = {});

}  // namespace leafsight

#endif
