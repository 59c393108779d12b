#ifndef LEAFSIGHT_FORWARD_SELECT_HPP
#define LEAFSIGHT_FORWARD_SELECT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "leafsight/crossval.hpp"

namespace leafsight {

// Greedy-inclusion record: the feature added at each step and the CV
// accuracy of the set including it. Accuracies are strictly increasing.
struct SelectionTrace {
  struct Step {
    std::string feature;
    Index feature_index = 0;
    Scalar cv_accuracy = 0;
  };
  std::vector<Step> steps;

  std::vector<Index> selected_indices() const;
};

// CV accuracy of a candidate column subset under a fixed fold plan.
using SubsetEvaluator =
    std::function<Scalar(const Dataset& data, const std::vector<Index>& columns,
                         const FoldPlan& plan)>;

// At each step every unselected feature is scored appended to the current
// set; the best candidate (ties to the lower feature index) is accepted
// only when it beats the incumbent accuracy by more than tie_epsilon.
// max_features < 0 means no cap. The fold plan is built once from
// (folds, rng_seed) and reused for every evaluation.
SelectionTrace forward_select(const Dataset& data, const SubsetEvaluator& evaluator,
                              int folds, std::uint64_t rng_seed,
                              Scalar tie_epsilon = 1e-6, int max_features = -1);

// Default evaluator: one-vs-one SVM accuracy (standardizer fit per fold).
SubsetEvaluator make_ovo_svm_evaluator(KernelSpec spec, SmoParams params);

}  // namespace leafsight

#endif
