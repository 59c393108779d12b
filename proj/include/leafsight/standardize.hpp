#ifndef LEAFSIGHT_STANDARDIZE_HPP
#define LEAFSIGHT_STANDARDIZE_HPP

#include "leafsight/dataset.hpp"

namespace leafsight {

// Per-feature mean and population standard deviation.
struct StandardizationParams {
  VecX means;
  VecX sigmas;
};

StandardizationParams fit_standardizer(const Dataset& data);

// x' = (x - mean) / sigma per feature; features with sigma = 0 map to 0.
Dataset apply_standardizer(const Dataset& data, const StandardizationParams& p);
MatX apply_standardizer(const MatX& x, const StandardizationParams& p);
VecX apply_standardizer(const VecX& row, const StandardizationParams& p);

}  // namespace leafsight

#endif
