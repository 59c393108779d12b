#include "leafsight/relieff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace leafsight {

ReliefFWeights relieff_rank(const Dataset& data, int k_neighbors,
                            Index n_samples, std::uint64_t rng_seed) {
  data.validate();
  const Index rows = data.rows();
  const Index nf = data.features();
  if (k_neighbors < 1) throw ParamError("relieff_rank: k_neighbors must be >= 1");

  const std::vector<Index> counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < static_cast<Index>(k_neighbors) + 1)
      throw ParamError("relieff_rank: class '" + data.classes[c] + "' has " +
                       std::to_string(counts[c]) + " rows, needs k+1 = " +
                       std::to_string(k_neighbors + 1));

  // Range normalization for both diff() and the neighbor metric.
  VecX lo = data.x.colwise().minCoeff();
  VecX hi = data.x.colwise().maxCoeff();
  MatX norm(rows, nf);
  for (Index j = 0; j < nf; ++j) {
    const Scalar range = hi(j) - lo(j);
    if (range > 0)
      norm.col(j) = (data.x.col(j).array() - lo(j)) / range;
    else
      norm.col(j).setZero();
  }

  std::vector<Scalar> prior(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c)
    prior[c] = static_cast<Scalar>(counts[c]) / static_cast<Scalar>(rows);

  std::vector<Index> sample_rows(rows);
  std::iota(sample_rows.begin(), sample_rows.end(), 0);
  if (n_samples > 0 && n_samples < rows) {
    std::mt19937_64 rng(rng_seed);
    std::shuffle(sample_rows.begin(), sample_rows.end(), rng);
    sample_rows.resize(n_samples);
  }
  const Scalar m = static_cast<Scalar>(sample_rows.size());
  const Scalar k = static_cast<Scalar>(k_neighbors);

  VecX weights = VecX::Zero(nf);
  std::vector<std::pair<Scalar, Index>> neigh;
  for (Index si : sample_rows) {
    const int cls = data.labels[si];
    // Distances to every other row, grouped by class.
    std::vector<std::vector<std::pair<Scalar, Index>>> by_class(counts.size());
    for (Index r = 0; r < rows; ++r) {
      if (r == si) continue;
      const Scalar d = (norm.row(r) - norm.row(si)).norm();
      by_class[data.labels[r]].emplace_back(d, r);
    }
    for (auto& grp : by_class)
      std::sort(grp.begin(), grp.end());  // distance then row index

    auto add_diffs = [&](const std::vector<std::pair<Scalar, Index>>& grp,
                         Scalar factor) {
      const int take = std::min<std::size_t>(k_neighbors, grp.size());
      for (int t = 0; t < take; ++t) {
        const Index r = grp[t].second;
        for (Index j = 0; j < nf; ++j)
          weights(j) += factor * std::abs(norm(r, j) - norm(si, j));
      }
    };

    add_diffs(by_class[cls], -1 / (m * k));
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (static_cast<int>(c) == cls) continue;
      add_diffs(by_class[c], prior[c] / (1 - prior[cls]) / (m * k));
    }
  }

  ReliefFWeights out;
  out.weights = weights;
  out.rank.resize(nf);
  std::iota(out.rank.begin(), out.rank.end(), 0);
  std::stable_sort(out.rank.begin(), out.rank.end(),
                   [&](Index a, Index b) { return weights(a) > weights(b); });
  return out;
}

std::vector<Index> select_positive(const ReliefFWeights& weights) {
  std::vector<Index> kept;
  for (Index j : weights.rank)
    if (weights.weights(j) > 0) kept.push_back(j);
  return kept;
}

}  // namespace leafsight
