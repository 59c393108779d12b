#ifndef LEAFSIGHT_CROSSVAL_HPP
#define LEAFSIGHT_CROSSVAL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "leafsight/dataset.hpp"
#include "leafsight/kernel.hpp"
#include "leafsight/metrics.hpp"
#include "leafsight/svm.hpp"

namespace leafsight {

// k disjoint row-index sets covering all rows with per-class counts
// differing by at most one across folds.
struct FoldPlan {
  int k = 0;
  std::vector<std::vector<Index>> folds;
  std::vector<std::string> warnings;  // under-filled classes, recorded not fatal
};

// Per-class seeded shuffle followed by round-robin assignment.
FoldPlan stratified_folds(const Dataset& data, int k, std::uint64_t rng_seed);

// A fitted model: maps a feature row to a class index of the full dataset.
using PredictFn = std::function<int(const VecX&)>;
// Trains on a fold's training split and returns its predictor.
using FitFn = std::function<PredictFn(const Dataset& train)>;

struct CvResult {
  std::vector<ConfusionMatrix> fold_matrices;
  std::vector<Scalar> fold_accuracy;
  Scalar mean_accuracy = 0;
  Scalar stddev_accuracy = 0;  // population stddev across folds
  Scalar mean_macro_precision = 0, stddev_macro_precision = 0;
  Scalar mean_macro_recall = 0, stddev_macro_recall = 0;
  Scalar mean_macro_f1 = 0, stddev_macro_f1 = 0;
  ConfusionMatrix pooled;  // merged across folds
};

// Runs every fold: fit on the complement, score the fold. Trainer errors
// abort with the fold index attached.
CvResult cross_validate(const Dataset& data, const FoldPlan& plan, const FitFn& fit);

// Standard trainer: fits the standardizer on the fold-training rows (no
// leakage), then a one-vs-one SVM. A gaussian spec with sigma <= 0 picks
// sigma by the median pairwise distance heuristic on the training rows.
FitFn make_ovo_svm_fit(KernelSpec spec, SmoParams params);

// CV accuracy of the one-vs-one SVM on a column subset of `data`;
// the evaluator forward selection plugs into.
Scalar ovo_cv_accuracy(const Dataset& data, const std::vector<Index>& columns,
                       const FoldPlan& plan, const KernelSpec& spec,
                       const SmoParams& params);

}  // namespace leafsight

#endif
