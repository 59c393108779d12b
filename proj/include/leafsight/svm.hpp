#ifndef LEAFSIGHT_SVM_HPP
#define LEAFSIGHT_SVM_HPP

#include <cstdint>

#include "leafsight/kernel.hpp"

namespace leafsight {

// Trained binary SVM in dual form: f(x) = sum_i coef_i K(sv_i, x) + bias
// with coef_i = alpha_i y_i.
struct BinarySvmModel {
  MatX support_vectors;  // one per row
  VecX dual_coefs;       // alpha_i y_i
  Scalar bias = 0;
  KernelSpec kernel;
  Scalar c = 1.0;
};

struct SmoParams {
  Scalar c = 1.0;
  Scalar tol = 1e-3;        // KKT tolerance
  int max_passes = 10;      // consecutive sweeps without change before stopping
  int max_sweeps = 100000;  // hard cap; exceeding it raises ConvergenceError
  std::uint64_t rng_seed = 0;
};

// Simplified Platt SMO with seeded random second-index selection and the
// non-bound / full-sweep partner fallback. Labels must be -1 / +1 and both
// present. At return every alpha satisfies the KKT conditions within tol
// and sum_i alpha_i y_i = 0 up to round-off.
BinarySvmModel smo_train(const MatX& x, const VecX& y, const KernelSpec& spec,
                         const SmoParams& params = {});

// Training-order multipliers and decision values alongside the model.
struct SmoDetail {
  BinarySvmModel model;
  VecX alphas;
  VecX decision_values;
  int sweeps = 0;
};

SmoDetail smo_train_detailed(const MatX& x, const VecX& y, const KernelSpec& spec,
                             const SmoParams& params = {});

Scalar svm_decision(const BinarySvmModel& model, const VecX& x);

}  // namespace leafsight

#endif
