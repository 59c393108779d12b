#include "leafsight/forward_select.hpp"

#include <algorithm>

namespace leafsight {

std::vector<Index> SelectionTrace::selected_indices() const {
  std::vector<Index> idx;
  idx.reserve(steps.size());
  for (const auto& s : steps) idx.push_back(s.feature_index);
  return idx;
}

SelectionTrace forward_select(const Dataset& data, const SubsetEvaluator& evaluator,
                              int folds, std::uint64_t rng_seed,
                              Scalar tie_epsilon, int max_features) {
  data.validate();
  if (data.features() < 1) throw ParamError("forward_select: no features");

  const FoldPlan plan = stratified_folds(data, folds, rng_seed);

  SelectionTrace trace;
  std::vector<Index> selected;
  std::vector<bool> used(data.features(), false);
  Scalar incumbent = 0;

  while (max_features < 0 ||
         static_cast<int>(selected.size()) < max_features) {
    Index best_feature = -1;
    Scalar best_acc = -1;
    for (Index j = 0; j < data.features(); ++j) {
      if (used[j]) continue;
      std::vector<Index> candidate = selected;
      candidate.push_back(j);
      Scalar acc;
      try {
        acc = evaluator(data, candidate, plan);
      } catch (const Error& e) {
        std::string set;
        for (Index c : candidate) set += (set.empty() ? "" : ",") + data.feature_names[c];
        throw Error("forward_select: evaluator failed on {" + set + "}: " + e.what());
      }
      if (acc > best_acc) {  // ties keep the lower feature index
        best_acc = acc;
        best_feature = j;
      }
    }
    if (best_feature < 0) break;  // every feature consumed
    if (!(best_acc > incumbent + tie_epsilon)) break;

    used[best_feature] = true;
    selected.push_back(best_feature);
    incumbent = best_acc;
    trace.steps.push_back(
        {data.feature_names[best_feature], best_feature, best_acc});
  }
  return trace;
}

SubsetEvaluator make_ovo_svm_evaluator(KernelSpec spec, SmoParams params) {
  return [spec, params](const Dataset& data, const std::vector<Index>& columns,
                        const FoldPlan& plan) {
    return ovo_cv_accuracy(data, columns, plan, spec, params);
  };
}

}  // namespace leafsight
