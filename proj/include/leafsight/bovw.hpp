#ifndef LEAFSIGHT_BOVW_HPP
#define LEAFSIGHT_BOVW_HPP

#include <cstdint>
#include <vector>

#include "leafsight/image.hpp"
#include "leafsight/svm.hpp"

namespace leafsight {

// (width + 1) x (height + 1) summed-area table; entry (y, x) holds the sum
// of all pixels in [0, x) x [0, y), so any box sum costs 4 lookups.
struct IntegralImage {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> s;

  Index width() const { return s.cols() - 1; }
  Index height() const { return s.rows() - 1; }

  // Sum over pixels [x0, x1) x [y0, y1), clamped to the image.
  std::int64_t box(Index x0, Index y0, Index x1, Index y1) const;
};

IntegralImage integral_image(const GrayImage& gray);

struct Keypoint {
  Scalar x = 0;
  Scalar y = 0;
  Scalar scale = 0;     // SURF sigma, 1.2 * filter_size / 9
  Scalar response = 0;  // determinant-of-Hessian strength
};

struct DetectorParams {
  std::vector<int> filter_sizes = {9, 15, 21, 27};
  // Absolute determinant-of-Hessian threshold on unit-scaled intensities.
  Scalar threshold = 0.001;
};

// Box-filter determinant-of-Hessian responses at the configured filter
// sizes with 3x3x3 non-maximum suppression across space and scale,
// thresholded and sorted by descending response. Scales whose filters do
// not fit the image are skipped.
std::vector<Keypoint> detect_keypoints(const IntegralImage& ii,
                                       const DetectorParams& params = {});

// Upright SURF-style descriptor: 4x4 spatial grid of Haar-wavelet sums
// (sum dx, sum |dx|, sum dy, sum |dy| per cell), Gaussian-weighted and
// L2-normalized. Samples are clamped at the image border.
VecX describe(const IntegralImage& ii, const Keypoint& kp);

struct Vocabulary {
  MatX centroids;  // k x 64
  int k() const { return static_cast<int>(centroids.rows()); }
  std::vector<Scalar> distortion_history;  // per Lloyd iteration
};

// k-means++ seeding followed by Lloyd iterations until the assignment
// fixpoint or max_iters. Descriptors are canonicalized by lexicographic
// order first, so the result depends only on the multiset and the seed.
Vocabulary kmeans_vocabulary(const MatX& descriptors, int k,
                             std::uint64_t rng_seed, int max_iters = 100);

struct BowHistogram {
  VecX h;             // L1-normalized when any descriptor was present
  bool empty = true;  // no descriptors voted
};

BowHistogram encode(const MatX& descriptors, const Vocabulary& vocab);

struct GateConfig {
  int vocabulary_size = 200;
  Scalar sample_fraction = 0.5;     // images used to build the vocabulary
  Scalar strongest_fraction = 0.7;  // per-class keypoint share kept for it
  DetectorParams detector;
  Scalar svm_c = 1.0;
  Scalar svm_tol = 1e-3;
  std::uint64_t rng_seed = 0;
};

// Stage-1 healthy/diseased gate: visual vocabulary plus a linear SVM over
// bag-of-word histograms (healthy maps to +1).
struct GateModel {
  Vocabulary vocabulary;
  BinarySvmModel svm;
  DetectorParams detector;
  GateConfig config;
};

struct GateDecision {
  bool healthy = false;
  Scalar score = 0;           // signed SVM decision value
  bool low_confidence = false;  // no descriptors; routed to diseased
};

// The vocabulary is built from a seeded per-class 50% image subsample
// using each class's strongest 70% of keypoints by detector response;
// every training image is then encoded and a linear SVM fit.
GateModel train_health_gate(const std::vector<GrayImage>& images,
                            const std::vector<bool>& healthy,
                            const GateConfig& cfg = {});

GateDecision classify_health(const GateModel& model, const GrayImage& img);
GateDecision classify_health(const GateModel& model, const RgbImage& img);

// Detector + descriptor pipeline for one image.
MatX image_descriptors(const GrayImage& img, const DetectorParams& params,
                       std::vector<Keypoint>* keypoints = nullptr);

}  // namespace leafsight

#endif
