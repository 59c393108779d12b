#ifndef LEAFSIGHT_RELIEFF_HPP
#define LEAFSIGHT_RELIEFF_HPP

#include <cstdint>
#include <vector>

#include "leafsight/dataset.hpp"

namespace leafsight {

// Per-feature ReliefF weights with the descending-weight rank order.
struct ReliefFWeights {
  VecX weights;             // one per feature, in [-1, 1]
  std::vector<Index> rank;  // feature indices, best first
};

// Multi-class ReliefF. Each evaluated instance contributes its k nearest
// same-class hits (penalty) and, per other class, its k nearest misses
// weighted by the class prior P(c) / (1 - P(class(sample))) (reward).
// Feature differences are range-normalized; neighbor distances are
// Euclidean on the range-normalized features. n_samples = 0 evaluates
// every row in order (deterministic exhaustive variant); n_samples > 0
// draws that many rows without replacement under the seed.
ReliefFWeights relieff_rank(const Dataset& data, int k_neighbors,
                            Index n_samples = 0, std::uint64_t rng_seed = 0);

// Indices of features with strictly positive weight, in rank order.
std::vector<Index> select_positive(const ReliefFWeights& weights);

}  // namespace leafsight

#endif
