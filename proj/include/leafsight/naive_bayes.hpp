#ifndef LEAFSIGHT_NAIVE_BAYES_HPP
#define LEAFSIGHT_NAIVE_BAYES_HPP

#include <string>
#include <vector>

#include "leafsight/dataset.hpp"

namespace leafsight {

// Gaussian Naive Bayes with maximum-likelihood parameters. Per-feature
// variances are floored at 1e-9 * (global feature variance + 1) so
// constant-in-class features stay finite.
struct GnbModel {
  std::vector<std::string> classes;
  VecX priors;   // sums to 1
  MatX means;    // classes x features
  MatX vars;     // classes x features, >= floor
};

struct GnbPrediction {
  int label = 0;
  VecX posterior;  // per class, sums to 1
};

GnbModel gnb_train(const Dataset& data);
GnbPrediction gnb_predict(const GnbModel& model, const VecX& x);

}  // namespace leafsight

#endif
