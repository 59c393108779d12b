#include "leafsight/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "leafsight/ovo.hpp"
#include "leafsight/standardize.hpp"

namespace leafsight {

FoldPlan stratified_folds(const Dataset& data, int k, std::uint64_t rng_seed) {
  if (k < 2) throw ParamError("stratified_folds: k must be >= 2");
  data.validate();

  FoldPlan plan;
  plan.k = k;
  plan.folds.assign(k, {});

  std::mt19937_64 rng(rng_seed);
  const std::vector<Index> counts = data.class_counts();
  for (int c = 0; c < data.num_classes(); ++c) {
    if (counts[c] < static_cast<Index>(k))
      plan.warnings.push_back("class '" + data.classes[c] + "' has " +
                              std::to_string(counts[c]) + " rows for " +
                              std::to_string(k) + " folds");
    std::vector<Index> rows;
    for (Index i = 0; i < data.rows(); ++i)
      if (data.labels[i] == c) rows.push_back(i);
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t m = 0; m < rows.size(); ++m)
      plan.folds[m % k].push_back(rows[m]);
  }
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

namespace {

void mean_stddev(const std::vector<Scalar>& v, Scalar& mean, Scalar& sd) {
  mean = std::accumulate(v.begin(), v.end(), Scalar(0)) / static_cast<Scalar>(v.size());
  Scalar var = 0;
  for (Scalar x : v) var += (x - mean) * (x - mean);
  sd = std::sqrt(var / static_cast<Scalar>(v.size()));
}

}  // namespace

CvResult cross_validate(const Dataset& data, const FoldPlan& plan, const FitFn& fit) {
  if (plan.k < 2 || static_cast<int>(plan.folds.size()) != plan.k)
    throw ParamError("cross_validate: invalid fold plan");

  CvResult result;
  result.pooled = ConfusionMatrix(data.classes);
  std::vector<Scalar> prec, rec, f1;

  for (int f = 0; f < plan.k; ++f) {
    const std::vector<Index>& test_rows = plan.folds[f];
    std::vector<Index> train_rows;
    for (int g = 0; g < plan.k; ++g)
      if (g != f)
        train_rows.insert(train_rows.end(), plan.folds[g].begin(),
                          plan.folds[g].end());
    std::sort(train_rows.begin(), train_rows.end());

    PredictFn predict;
    try {
      predict = fit(data.select_rows(train_rows));
    } catch (const Error& e) {
      throw Error("cross_validate: fold " + std::to_string(f) + ": " + e.what());
    }

    ConfusionMatrix cm(data.classes);
    for (Index row : test_rows)
      cm.accumulate(data.labels[row], predict(data.x.row(row).transpose()));
    const MetricReport rep = report(cm);
    result.fold_matrices.push_back(cm);
    result.fold_accuracy.push_back(rep.accuracy);
    prec.push_back(rep.macro_precision);
    rec.push_back(rep.macro_recall);
    f1.push_back(rep.macro_f1);
    result.pooled.merge(cm);
  }

  mean_stddev(result.fold_accuracy, result.mean_accuracy, result.stddev_accuracy);
  mean_stddev(prec, result.mean_macro_precision, result.stddev_macro_precision);
  mean_stddev(rec, result.mean_macro_recall, result.stddev_macro_recall);
  mean_stddev(f1, result.mean_macro_f1, result.stddev_macro_f1);
  return result;
}

FitFn make_ovo_svm_fit(KernelSpec spec, SmoParams params) {
  return [spec, params](const Dataset& train) -> PredictFn {
    KernelSpec resolved = spec;
    if (spec.kind == KernelKind::Gaussian && spec.sigma <= 0)
      resolved.sigma = median_pairwise_distance(train.x, 500, params.rng_seed);
    const auto standardizer = std::make_shared<StandardizationParams>(
        fit_standardizer(train));
    const auto model = std::make_shared<OvoSvmModel>(
        ovo_train(apply_standardizer(train, *standardizer), resolved, params));
    return [standardizer, model](const VecX& x) {
      return ovo_predict(*model, apply_standardizer(x, *standardizer)).label;
    };
  };
}

Scalar ovo_cv_accuracy(const Dataset& data, const std::vector<Index>& columns,
                       const FoldPlan& plan, const KernelSpec& spec,
                       const SmoParams& params) {
  const Dataset subset = data.select_columns(columns);
  const CvResult r = cross_validate(subset, plan, make_ovo_svm_fit(spec, params));
  return r.mean_accuracy;
}

}  // namespace leafsight
