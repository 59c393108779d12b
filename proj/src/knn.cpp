#include "leafsight/knn.hpp"

#include <algorithm>
#include <vector>

namespace leafsight {

int knn_predict(const Dataset& train, const VecX& x, int k) {
  if (k < 1) throw ParamError("knn_predict: k must be >= 1");
  if (static_cast<Index>(k) > train.rows())
    throw ParamError("knn_predict: k exceeds training rows");
  if (x.size() != train.features())
    throw ParamError("knn_predict: width mismatch");

  std::vector<std::pair<Scalar, Index>> dist;
  dist.reserve(train.rows());
  for (Index i = 0; i < train.rows(); ++i)
    dist.emplace_back((train.x.row(i).transpose() - x).norm(), i);
  std::sort(dist.begin(), dist.end());  // distance, then row order

  std::vector<int> votes(train.classes.size(), 0);
  std::vector<Scalar> dist_sum(train.classes.size(), 0);
  for (int t = 0; t < k; ++t) {
    const int cls = train.labels[dist[t].second];
    ++votes[cls];
    dist_sum[cls] += dist[t].first;
  }

  int best = -1;
  for (std::size_t c = 0; c < votes.size(); ++c) {
    if (votes[c] == 0) continue;
    if (best < 0 || votes[c] > votes[best]) {
      best = static_cast<int>(c);
      continue;
    }
    if (votes[c] == votes[best]) {
      const Scalar mean_c = dist_sum[c] / votes[c];
      const Scalar mean_b = dist_sum[best] / votes[best];
      if (mean_c < mean_b) best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace leafsight
