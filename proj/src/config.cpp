#include "leafsight/config.hpp"

#include <sstream>

#include "leafsight/dataset.hpp"
#include "leafsight/kernel.hpp"

namespace leafsight {

std::vector<GlcmOffset> parse_offsets(const std::string& text) {
  std::vector<GlcmOffset> offsets;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ';')) {
    const auto comma = part.find(',');
    if (comma == std::string::npos)
      throw ParamError("glcm_offsets: expected 'dx,dy' pairs separated by ';', got '" +
                       part + "'");
    try {
      offsets.push_back({std::stoi(part.substr(0, comma)),
                         std::stoi(part.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ParamError("glcm_offsets: unparseable pair '" + part + "'");
    }
  }
  if (offsets.empty()) throw ParamError("glcm_offsets: empty list");
  return offsets;
}

void PipelineConfig::validate() const {
  if (bilateral_spatial_sigma <= 0) throw ParamError("bilateral_spatial_sigma must be > 0");
  if (bilateral_range_sigma <= 0) throw ParamError("bilateral_range_sigma must be > 0");
  if (bilateral_radius < 1) throw ParamError("bilateral_radius must be >= 1");
  if (min_component_px < 1) throw ParamError("min_component_px must be >= 1");
  if (lesion_polarity != "dark" && lesion_polarity != "bright")
    throw ParamError("lesion_polarity must be dark or bright");
  if (gray_levels < 2) throw ParamError("gray_levels must be >= 2");
  for (const auto& o : parse_offsets(glcm_offsets))
    if (o.dx == 0 && o.dy == 0) throw ParamError("glcm_offsets: (0,0) not allowed");
  if (bovw_k < 2) throw ParamError("bovw_k must be >= 2");
  if (bovw_sample_fraction <= 0 || bovw_sample_fraction > 1)
    throw ParamError("bovw_sample_fraction must be in (0, 1]");
  if (bovw_strongest_fraction <= 0 || bovw_strongest_fraction > 1)
    throw ParamError("bovw_strongest_fraction must be in (0, 1]");
  kernel_from_name(svm_kernel);
  kernel_from_name(ffs_kernel);
  if (svm_c <= 0) throw ParamError("svm_c must be > 0");
  if (svm_tol <= 0) throw ParamError("svm_tol must be > 0");
  if (svm_max_passes < 1) throw ParamError("svm_max_passes must be >= 1");
  if (relieff_k < 1) throw ParamError("relieff_k must be >= 1");
  if (relieff_m < 0) throw ParamError("relieff_m must be >= 0");
  if (ffs_epsilon < 0) throw ParamError("ffs_epsilon must be >= 0");
  if (ffs_folds < 2) throw ParamError("ffs_folds must be >= 2");
  if (cv_folds < 2) throw ParamError("cv_folds must be >= 2");
  if (jobs < 1) throw ParamError("jobs must be >= 1");
}

SegmentationParams PipelineConfig::segmentation_params() const {
  SegmentationParams p;
  p.bilateral_spatial_sigma = bilateral_spatial_sigma;
  p.bilateral_range_sigma = bilateral_range_sigma;
  p.bilateral_radius = bilateral_radius;
  p.min_component_px = min_component_px;
  return p;
}

FeatureConfig PipelineConfig::feature_config() const {
  FeatureConfig cfg;
  cfg.gray_levels = gray_levels;
  cfg.offsets = parse_offsets(glcm_offsets);
  cfg.symmetric = glcm_symmetric;
  return cfg;
}

LesionPolarity PipelineConfig::polarity() const {
  return lesion_polarity == "bright" ? LesionPolarity::Bright : LesionPolarity::Dark;
}

std::string PipelineConfig::to_text() const {
  std::ostringstream out;
  out << "bilateral_spatial_sigma = " << format_double(bilateral_spatial_sigma) << "\n"
      << "bilateral_range_sigma = " << format_double(bilateral_range_sigma) << "\n"
      << "bilateral_radius = " << bilateral_radius << "\n"
      << "min_component_px = " << min_component_px << "\n"
      << "lesion_polarity = " << lesion_polarity << "\n"
      << "gray_levels = " << gray_levels << "\n"
      << "glcm_offsets = " << glcm_offsets << "\n"
      << "glcm_symmetric = " << (glcm_symmetric ? "true" : "false") << "\n"
      << "bovw_k = " << bovw_k << "\n"
      << "bovw_detector_threshold = " << format_double(bovw_detector_threshold) << "\n"
      << "bovw_sample_fraction = " << format_double(bovw_sample_fraction) << "\n"
      << "bovw_strongest_fraction = " << format_double(bovw_strongest_fraction) << "\n"
      << "svm_kernel = " << svm_kernel << "\n"
      << "svm_c = " << format_double(svm_c) << "\n"
      << "svm_tol = " << format_double(svm_tol) << "\n"
      << "svm_max_passes = " << svm_max_passes << "\n"
      << "gaussian_sigma = " << format_double(gaussian_sigma) << "\n"
      << "relieff_k = " << relieff_k << "\n"
      << "relieff_m = " << relieff_m << "\n"
      << "ffs_epsilon = " << format_double(ffs_epsilon) << "\n"
      << "ffs_kernel = " << ffs_kernel << "\n"
      << "ffs_folds = " << ffs_folds << "\n"
      << "cv_folds = " << cv_folds << "\n"
      << "rng_seed = " << rng_seed << "\n"
      << "jobs = " << jobs << "\n";
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParamError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace

bool PipelineConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "bilateral_spatial_sigma") bilateral_spatial_sigma = std::stod(value);
    else if (key == "bilateral_range_sigma") bilateral_range_sigma = std::stod(value);
    else if (key == "bilateral_radius") bilateral_radius = std::stoi(value);
    else if (key == "min_component_px") min_component_px = std::stoi(value);
    else if (key == "lesion_polarity") lesion_polarity = value;
    else if (key == "gray_levels") gray_levels = std::stoi(value);
    else if (key == "glcm_offsets") glcm_offsets = value;
    else if (key == "glcm_symmetric") glcm_symmetric = parse_bool(value, key);
    else if (key == "bovw_k") bovw_k = std::stoi(value);
    else if (key == "bovw_detector_threshold") bovw_detector_threshold = std::stod(value);
    else if (key == "bovw_sample_fraction") bovw_sample_fraction = std::stod(value);
    else if (key == "bovw_strongest_fraction") bovw_strongest_fraction = std::stod(value);
    else if (key == "svm_kernel") svm_kernel = value;
    else if (key == "svm_c") svm_c = std::stod(value);
    else if (key == "svm_tol") svm_tol = std::stod(value);
    else if (key == "svm_max_passes") svm_max_passes = std::stoi(value);
    else if (key == "gaussian_sigma") gaussian_sigma = std::stod(value);
    else if (key == "relieff_k") relieff_k = std::stoi(value);
    else if (key == "relieff_m") relieff_m = std::stoi(value);
    else if (key == "ffs_epsilon") ffs_epsilon = std::stod(value);
    else if (key == "ffs_kernel") ffs_kernel = value;
    else if (key == "ffs_folds") ffs_folds = std::stoi(value);
    else if (key == "cv_folds") cv_folds = std::stoi(value);
    else if (key == "rng_seed") rng_seed = std::stoull(value);
    else if (key == "jobs") jobs = std::stoi(value);
    else return false;
  } catch (const std::invalid_argument&) {
    throw ParamError("config key '" + key + "': unparseable value '" + value + "'");
  }
  return true;
}

void PipelineConfig::apply_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw FormatError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!set(key, value))
      throw FormatError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
  }
}

}  // namespace leafsight
