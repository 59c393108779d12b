#ifndef LEAFSIGHT_OVO_HPP
#define LEAFSIGHT_OVO_HPP

#include <string>
#include <vector>

#include "leafsight/dataset.hpp"
#include "leafsight/svm.hpp"

namespace leafsight {

// One-vs-one multi-class SVM: one binary model per unordered class pair
// (a < b, class-pair order), trained on those two classes' rows with
// class a mapped to +1.
struct OvoSvmModel {
  std::vector<std::string> classes;
  struct Pair {
    int a = 0;
    int b = 0;
    BinarySvmModel svm;
  };
  std::vector<Pair> pairs;  // N (N - 1) / 2 entries

  int num_classes() const { return static_cast<int>(classes.size()); }
};

struct OvoPrediction {
  int label = 0;                 // winning class index
  std::vector<int> votes;        // per class, sums to N (N - 1) / 2
  std::vector<Scalar> score_sum; // sum of |decision| over votes won
};

OvoSvmModel ovo_train(const Dataset& data, const KernelSpec& spec,
                      const SmoParams& params = {});

// Each pair votes by decision sign (>= 0 elects class a). Vote ties break
// to the larger sum of |decision scores| among the tied classes, then to
// class order.
OvoPrediction ovo_predict(const OvoSvmModel& model, const VecX& x);

}  // namespace leafsight

#endif
