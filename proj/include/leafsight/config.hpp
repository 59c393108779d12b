#ifndef LEAFSIGHT_CONFIG_HPP
#define LEAFSIGHT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "leafsight/glcm.hpp"
#include "leafsight/segmentation.hpp"

namespace leafsight {

// Every tunable of the pipeline, one flat key per field. Values load from
// a `key = value` config file; command-line flags override file values.
struct PipelineConfig {
  // segmentation
  Scalar bilateral_spatial_sigma = 3.0;
  Scalar bilateral_range_sigma = 25.0;
  int bilateral_radius = 5;
  int min_component_px = 16;
  std::string lesion_polarity = "dark";  // dark | bright

  // features
  int gray_levels = 8;
  std::string glcm_offsets = "1,0;1,1;0,1;-1,1";
  bool glcm_symmetric = true;

  // stage-1 gate
  int bovw_k = 200;
  Scalar bovw_detector_threshold = 0.001;
  Scalar bovw_sample_fraction = 0.5;
  Scalar bovw_strongest_fraction = 0.7;

  // classification
  std::string svm_kernel = "cubic";  // linear | quadratic | cubic | gaussian
  Scalar svm_c = 1.0;
  Scalar svm_tol = 1e-3;
  int svm_max_passes = 10;
  Scalar gaussian_sigma = 0;  // 0 = median pairwise distance heuristic

  // selection
  int relieff_k = 10;
  int relieff_m = 0;  // 0 = every row (deterministic exhaustive)
  Scalar ffs_epsilon = 1e-6;
  std::string ffs_kernel = "cubic";
  int ffs_folds = 5;

  // evaluation & execution
  int cv_folds = 10;
  std::uint64_t rng_seed = 42;
  int jobs = 1;

  void validate() const;
  SegmentationParams segmentation_params() const;
  FeatureConfig feature_config() const;
  LesionPolarity polarity() const;

  // One "key = value" line per field, in declaration order.
  std::string to_text() const;
  // Unknown keys are errors; absent keys keep their defaults.
  void apply_text(const std::string& text);
  bool set(const std::string& key, const std::string& value);
};

std::vector<GlcmOffset> parse_offsets(const std::string& text);

}  // namespace leafsight

#endif
