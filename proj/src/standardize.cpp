#include "leafsight/standardize.hpp"

#include <cmath>

namespace leafsight {

StandardizationParams fit_standardizer(const Dataset& data) {
  if (data.rows() < 2) throw ParamError("fit_standardizer: need at least two rows");
  StandardizationParams p;
  p.means = data.x.colwise().mean();
  p.sigmas.resize(data.features());
  const Scalar inv = Scalar(1) / static_cast<Scalar>(data.rows());
  for (Index j = 0; j < data.features(); ++j) {
    const Scalar var = (data.x.col(j).array() - p.means(j)).square().sum() * inv;
    p.sigmas(j) = std::sqrt(std::max(Scalar(0), var));
  }
  return p;
}

MatX apply_standardizer(const MatX& x, const StandardizationParams& p) {
  if (x.cols() != p.means.size())
    throw ParamError("apply_standardizer: width mismatch");
  MatX out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    if (p.sigmas(j) > 0)
      out.col(j) = (x.col(j).array() - p.means(j)) / p.sigmas(j);
    else
      out.col(j).setZero();
  }
  return out;
}

VecX apply_standardizer(const VecX& row, const StandardizationParams& p) {
  if (row.size() != p.means.size())
    throw ParamError("apply_standardizer: width mismatch");
  VecX out(row.size());
  for (Index j = 0; j < row.size(); ++j)
    out(j) = p.sigmas(j) > 0 ? (row(j) - p.means(j)) / p.sigmas(j) : 0;
  return out;
}

Dataset apply_standardizer(const Dataset& data, const StandardizationParams& p) {
  Dataset out = data;
  out.x = apply_standardizer(data.x, p);
  return out;
}

}  // namespace leafsight
