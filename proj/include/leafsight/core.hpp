#ifndef LEAFSIGHT_CORE_HPP
#define LEAFSIGHT_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace leafsight {

using Scalar = double;
using Index = Eigen::Index;

// Dense aliases used throughout the core. Rasters are row-major so that
// pixel (x, y) maps to coefficient (row = y, col = x).
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using ArrX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
using ArrXX = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatU8 = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ArrB = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatI32 = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input bytes (image decoders, CSV, config files).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

// A precondition on user-supplied parameters or data does not hold.
class ParamError : public Error {
 public:
  explicit ParamError(const std::string& msg) : Error(msg) {}
};

// Segmentation produced an empty leaf mask.
class NoLeafError : public Error {
 public:
  NoLeafError(const std::string& msg, int label_count)
      : Error(msg), label_count_(label_count) {}
  int label_count() const { return label_count_; }

 private:
  int label_count_;
};

// Histogram with fewer than two occupied gray levels.
class DegenerateHistogramError : public Error {
 public:
  explicit DegenerateHistogramError(const std::string& msg) : Error(msg) {}
};

// No co-occurring pixel pair fell inside the mask for any offset.
class EmptyGlcmError : public Error {
 public:
  explicit EmptyGlcmError(const std::string& msg) : Error(msg) {}
};

// Iterative solver hit its iteration cap before satisfying its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, Scalar residual)
      : Error(msg), residual_(residual) {}
  Scalar residual() const { return residual_; }

 private:
  Scalar residual_;
};

// Round half away from zero; inputs here are non-negative intensities.
inline int round_half_up(Scalar v) { return static_cast<int>(v + Scalar(0.5)); }

inline std::uint8_t clamp_u8(Scalar v) {
  int r = round_half_up(v);
  if (r < 0) return 0;
  if (r > 255) return 255;
  return static_cast<std::uint8_t>(r);
}

}  // namespace leafsight

#endif
