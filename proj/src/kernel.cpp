#include "leafsight/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace leafsight {

void KernelSpec::validate() const {
  if (kind == KernelKind::Polynomial && degree < 1)
    throw ParamError("kernel: polynomial degree must be >= 1");
  if (kind == KernelKind::Gaussian && !(sigma > 0))
    throw ParamError("kernel: gaussian sigma must be > 0");
}

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::Linear:
      return "linear";
    case KernelKind::Polynomial:
      return degree == 2 ? "quadratic" : degree == 3 ? "cubic"
                                                     : "poly" + std::to_string(degree);
    case KernelKind::Gaussian:
      return "gaussian";
  }
  return "?";
}

KernelSpec kernel_from_name(const std::string& name) {
  if (name == "linear") return KernelSpec::linear();
  if (name == "quadratic") return KernelSpec::polynomial(2);
  if (name == "cubic") return KernelSpec::cubic();
  if (name == "gaussian") return KernelSpec::gaussian(1.0);
  throw ParamError("unknown kernel '" + name +
                   "' (expected linear|quadratic|cubic|gaussian)");
}

Scalar kernel_eval(const KernelSpec& spec, const Eigen::Ref<const VecX>& x,
                   const Eigen::Ref<const VecX>& y) {
  if (x.size() != y.size()) throw ParamError("kernel_eval: length mismatch");
  switch (spec.kind) {
    case KernelKind::Linear:
      return x.dot(y);
    case KernelKind::Polynomial: {
      const Scalar base = 1 + x.dot(y);
      Scalar r = 1;
      for (int i = 0; i < spec.degree; ++i) r *= base;
      return r;
    }
    case KernelKind::Gaussian: {
      const Scalar d2 = (x - y).squaredNorm();
      return std::exp(-d2 / (2 * spec.sigma * spec.sigma));
    }
  }
  return 0;
}

Scalar median_pairwise_distance(const MatX& x, Index max_rows, std::uint64_t seed) {
  std::vector<Index> idx(x.rows());
  std::iota(idx.begin(), idx.end(), 0);
  if (x.rows() > max_rows) {
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(max_rows);
    std::sort(idx.begin(), idx.end());
  }
  std::vector<Scalar> dists;
  dists.reserve(idx.size() * (idx.size() - 1) / 2);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b)
      dists.push_back((x.row(idx[a]) - x.row(idx[b])).norm());
  if (dists.empty()) return 1;
  std::sort(dists.begin(), dists.end());
  const std::size_t mid = dists.size() / 2;
  const Scalar median = dists.size() % 2 == 1
                            ? dists[mid]
                            : (dists[mid - 1] + dists[mid]) / 2;
  return median > 0 ? median : 1;
}

}  // namespace leafsight
