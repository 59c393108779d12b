#ifndef LEAFSIGHT_KERNEL_HPP
#define LEAFSIGHT_KERNEL_HPP

#include <cstdint>
#include <string>

#include "leafsight/core.hpp"

namespace leafsight {

enum class KernelKind { Linear, Polynomial, Gaussian };

// linear: <x,y>; polynomial: (1 + <x,y>)^d; gaussian:
// exp(-||x-y||^2 / (2 sigma^2)).
struct KernelSpec {
  KernelKind kind = KernelKind::Linear;
  int degree = 3;       // polynomial only
  Scalar sigma = 1.0;   // gaussian only

  static KernelSpec linear() { return {KernelKind::Linear, 1, 1.0}; }
  static KernelSpec polynomial(int d) { return {KernelKind::Polynomial, d, 1.0}; }
  static KernelSpec cubic() { return polynomial(3); }
  static KernelSpec gaussian(Scalar sigma) { return {KernelKind::Gaussian, 1, sigma}; }

  void validate() const;
  std::string name() const;
};

// Parses linear | quadratic | cubic | gaussian (gaussian sigma filled by
// the caller or the median heuristic).
KernelSpec kernel_from_name(const std::string& name);

Scalar kernel_eval(const KernelSpec& spec, const Eigen::Ref<const VecX>& x,
                   const Eigen::Ref<const VecX>& y);

// Median pairwise Euclidean distance over a seeded subsample of at most
// max_rows rows; falls back to 1 when the median distance is zero.
Scalar median_pairwise_distance(const MatX& x, Index max_rows = 500,
                                std::uint64_t seed = 0);

}  // namespace leafsight

#endif
